//! Monotone-chain hull in the plane.

use super::{PlaneIncidence, Polytope};
use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};

pub(super) fn hull(points: &[Vector], tol: f64) -> Result<Polytope> {
    affine_rank_check(points, tol)?;

    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].lex_cmp(&points[b]));
    idx.dedup_by(|a, b| points[*a].distance(&points[*b]) <= tol);

    // Pops `a` whenever it lies within tol of segment (o, b) or to its right,
    // so collinear boundary points never survive.
    let turns_left = |o: usize, a: usize, b: usize| {
        let (po, pa, pb) = (points[o], points[a], points[b]);
        let ob = pb - po;
        let len = ob.norm();
        (pa - po).perp_dot(&ob) > tol * len
    };
    let mut chain: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while chain.len() >= start + 2
                && !turns_left(chain[chain.len() - 2], chain[chain.len() - 1], i)
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain.pop();
    }
    if chain.len() < 3 {
        return Err(Error::Degenerate {
            rank: 1,
            required: 2,
        });
    }

    let ring: Vec<Vector> = chain.iter().map(|&i| points[i]).collect();
    let n = ring.len();
    let planes = (0..n)
        .map(|k| {
            let (a, b) = (ring[k], ring[(k + 1) % n]);
            let d = b - a;
            let normal = UnitVector::new(Vector::new(&[d[1], -d[0]]))?;
            let offset = 0.5 * (normal.dot(&a) + normal.dot(&b));
            Ok(PlaneIncidence {
                normal,
                offset,
                members: vec![k, (k + 1) % n],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Polytope::assemble(2, &ring, planes, tol)
}

fn affine_rank_check(points: &[Vector], tol: f64) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::Degenerate {
            rank: 0,
            required: 2,
        });
    };
    let far = points
        .iter()
        .max_by(|a, b| a.distance(first).total_cmp(&b.distance(first)))
        .unwrap();
    let axis = *far - *first;
    if axis.norm() <= tol {
        return Err(Error::Degenerate {
            rank: 0,
            required: 2,
        });
    }
    let axis_len = axis.norm();
    let off_line = points
        .iter()
        .map(|p| ((*p - *first).perp_dot(&axis) / axis_len).abs())
        .fold(0.0, f64::max);
    if off_line <= tol {
        return Err(Error::Degenerate {
            rank: 1,
            required: 2,
        });
    }
    Ok(())
}
