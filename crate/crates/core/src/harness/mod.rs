//! Sweeps that count, bound and compare over grids of rational dilations.
//!
//! Rows are computed in parallel and merged in `t` order; a row depends
//! only on its own `t`, so reports do not depend on the thread count.

mod report;
mod spec;

use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::rational_to_f64;
use crate::bounds::{
    bound_circle_2, bound_ellipse_2_with, bound_ellipsoid_1b_with, bound_revolution_3, bound_sphere_1a,
    BoundBreakdown, Theorem,
};
use crate::error::{Error, Result};
use crate::exactcount::{count_ball, count_circle, count_ellipse, count_ellipsoid, count_revolution, CountResult};
use crate::forms::{Dimension, EllipsoidInvariants, QuadraticForm};
use crate::profiles::{compute_invariants, ProfileInvariants, RevolutionProfile};

pub use report::{emit_report, ReportFormat, ReportSummary, VerificationReport, VerificationRow, CSV_HEADER};
pub use spec::{rational_grid, Domain, DomainSpec};

/// Grid size used when a profile's invariants must be sampled.
pub const PROFILE_GRID: usize = 4000;

/// Exact count of the spec's body dilated by `t ≥ 0`.
pub fn count_at(spec: &DomainSpec, t: &BigRational) -> Result<CountResult> {
    if t < &BigRational::from_integer(0.into()) {
        return Err(Error::NegativeInput);
    }
    let t_sq = t * t;
    let count = match &spec.domain {
        Domain::Circle => count_circle(&t_sq)?,
        Domain::Ball => count_ball(&t_sq)?,
        Domain::Ellipse(form) => count_ellipse(form, &t_sq)?,
        Domain::Ellipsoid(form) => count_ellipsoid(form, &t_sq)?,
        Domain::Revolution(profile) => count_revolution(profile, t)?,
    };
    Ok(CountResult::new(t.clone(), count, spec.volume.clone()))
}

/// Precomputed invariants for evaluating one theorem on one domain.
#[derive(Clone, Debug)]
pub enum BoundContext {
    Sphere,
    Circle,
    Ellipsoid(EllipsoidInvariants),
    Ellipse(EllipsoidInvariants),
    Revolution(ProfileInvariants),
}

impl BoundContext {
    /// Checks that `theorem` covers the spec's domain and computes what it needs.
    /// The unit ball is also an ellipsoid and a body of revolution, and the
    /// unit disc an ellipse.
    pub fn prepare(spec: &DomainSpec, theorem: Theorem) -> Result<Self> {
        let identity = |form: &QuadraticForm| form.is_identity();
        let ctx = match (theorem, &spec.domain) {
            (Theorem::Sphere1A, Domain::Ball) => Some(BoundContext::Sphere),
            (Theorem::Sphere1A, Domain::Ellipsoid(f)) if identity(f) => Some(BoundContext::Sphere),
            (Theorem::Circle2, Domain::Circle) => Some(BoundContext::Circle),
            (Theorem::Circle2, Domain::Ellipse(f)) if identity(f) => Some(BoundContext::Circle),
            (Theorem::Ellipsoid1B, Domain::Ellipsoid(f)) => {
                Some(BoundContext::Ellipsoid(EllipsoidInvariants::compute(f)))
            }
            (Theorem::Ellipsoid1B, Domain::Ball) => Some(BoundContext::Ellipsoid(
                EllipsoidInvariants::compute(&QuadraticForm::identity(Dimension::Three)),
            )),
            (Theorem::Ellipse2, Domain::Ellipse(f)) => Some(BoundContext::Ellipse(EllipsoidInvariants::compute(f))),
            (Theorem::Ellipse2, Domain::Circle) => Some(BoundContext::Ellipse(EllipsoidInvariants::compute(
                &QuadraticForm::identity(Dimension::Two),
            ))),
            (Theorem::Revolution3, Domain::Revolution(p)) => {
                Some(BoundContext::Revolution(compute_invariants(p, PROFILE_GRID)?))
            }
            (Theorem::Revolution3, Domain::Ball) => Some(BoundContext::Revolution(compute_invariants(
                &RevolutionProfile::sphere(),
                PROFILE_GRID,
            )?)),
            _ => None,
        };
        ctx.ok_or_else(|| Error::IncompatibleTheorem {
            theorem: theorem.to_string(),
            kind: spec.domain.kind().to_string(),
        })
    }

    pub fn bound(&self, t: f64) -> Result<BoundBreakdown> {
        match self {
            BoundContext::Sphere => bound_sphere_1a(t),
            BoundContext::Circle => bound_circle_2(t),
            BoundContext::Ellipsoid(inv) => bound_ellipsoid_1b_with(inv, t),
            BoundContext::Ellipse(inv) => bound_ellipse_2_with(inv, t),
            BoundContext::Revolution(inv) => bound_revolution_3(inv, t),
        }
    }
}

fn sweep_row(spec: &DomainSpec, ctx: &BoundContext, t: &BigRational) -> Result<VerificationRow> {
    let start = Instant::now();
    let counted = count_at(spec, t)?;
    let bound = ctx.bound(rational_to_f64(t))?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(VerificationRow::new(
        counted.t,
        counted.count,
        counted.main_term,
        counted.discrepancy,
        bound.total,
        bound.valid,
        elapsed_ms,
    ))
}

/// Counts and bounds every `t` of the grid (sorted, duplicates dropped).
pub fn run_sweep(spec: &DomainSpec, theorem: Theorem, t_grid: &[BigRational]) -> Result<VerificationReport> {
    let start = Instant::now();
    let ctx = BoundContext::prepare(spec, theorem)?;
    let mut grid = t_grid.to_vec();
    grid.sort();
    grid.dedup();
    if let Some(first) = grid.first() {
        if first <= &BigRational::from_integer(0.into()) {
            return Err(Error::NonpositiveT(rational_to_f64(first)));
        }
    }
    let rows = grid
        .par_iter()
        .map(|t| sweep_row(spec, &ctx, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_rows(rows, start.elapsed().as_secs_f64() * 1e3))
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(
    spec: &DomainSpec,
    theorem: Theorem,
    t_grid: &[BigRational],
    threads: usize,
) -> Result<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Parse(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_sweep(spec, theorem, t_grid))
}
