//! Small linear programs over cones of sphere points.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::geom::Vector;

fn lp_err(e: minilp::Error) -> Error {
    Error::Lp(e.to_string())
}

/// Maximizes `s` subject to `P·xᵢ + s ≤ 0` with `P ∈ [−1, 1]^d`.
/// A positive optimum means the points avoid the closed hemisphere H(P).
pub(crate) fn separation(points: &[Vector]) -> Result<(f64, Vector)> {
    let d = points[0].dim();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let p: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let s = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for x in points {
        let mut row: Vec<_> = p.iter().zip(x.as_slice()).map(|(&v, &c)| (v, c)).collect();
        row.push((s, 1.0));
        lp.add_constraint(&row[..], ComparisonOp::Le, 0.0);
    }
    let sol = lp.solve().map_err(lp_err)?;
    let coords: Vec<f64> = p.iter().map(|&v| sol[v]).collect();
    Ok((sol.objective(), Vector::new(&coords)))
}

/// Convex weights `λ` minimizing `‖Σ λᵢ xᵢ − target‖₁`; with `simplex` the
/// weights sum to one, otherwise they are only nonnegative (cone membership).
pub(crate) fn combination(
    points: &[Vector],
    target: &Vector,
    simplex: bool,
) -> Result<(Vec<f64>, f64)> {
    let d = target.dim();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambda: Vec<_> = points
        .iter()
        .map(|_| lp.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    let plus: Vec<_> = (0..d)
        .map(|_| lp.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let minus: Vec<_> = (0..d)
        .map(|_| lp.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    for j in 0..d {
        let mut row: Vec<_> = lambda.iter().zip(points).map(|(&l, x)| (l, x[j])).collect();
        row.push((plus[j], 1.0));
        row.push((minus[j], -1.0));
        lp.add_constraint(&row[..], ComparisonOp::Eq, target[j]);
    }
    if simplex {
        let row: Vec<_> = lambda.iter().map(|&l| (l, 1.0)).collect();
        lp.add_constraint(&row[..], ComparisonOp::Eq, 1.0);
    }
    let sol = lp.solve().map_err(lp_err)?;
    let weights = lambda.iter().map(|&l| sol[l]).collect();
    Ok((weights, sol.objective()))
}

/// `min Σ λᵢ aᵢ` over the probability simplex.
pub(crate) fn simplex_min(values: &[f64]) -> Result<f64> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambda: Vec<_> = values
        .iter()
        .map(|&a| lp.add_var(a, (0.0, f64::INFINITY)))
        .collect();
    let row: Vec<_> = lambda.iter().map(|&l| (l, 1.0)).collect();
    lp.add_constraint(&row[..], ComparisonOp::Eq, 1.0);
    Ok(lp.solve().map_err(lp_err)?.objective())
}

/// `min q·x` over the box `[−1, 1]^d` intersected with `{x : gᵢ·x ≥ 0}`.
pub(crate) fn polar_min(generators: &[Vector], q: &Vector) -> Result<f64> {
    let d = q.dim();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let x: Vec<_> = (0..d).map(|j| lp.add_var(q[j], (-1.0, 1.0))).collect();
    for g in generators {
        let row: Vec<_> = x.iter().zip(g.as_slice()).map(|(&v, &c)| (v, c)).collect();
        lp.add_constraint(&row[..], ComparisonOp::Ge, 0.0);
    }
    Ok(lp.solve().map_err(lp_err)?.objective())
}
