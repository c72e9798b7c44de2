//! Deterministic baselines: three scalar autonomous ODEs and the closed-form
//! statistics driven by them.
//!
//! The scaled trajectories of the random processes concentrate around these
//! solutions:
//!
//! * `Y`: unmatched-degree scale of the packing process,
//!   y' = 6 e^{-y^2} - 4, y(0) = 0. Increases to the finite limit
//!   [`zeta()`] = sqrt(ln(3/2)), the root of the right-hand side.
//! * `A`: accepted-edge scale of the triangle-free acceptance process,
//!   a' = e^{-4 a^2}, a(0) = 0. Strictly increasing, no finite limit.
//! * `Z`: unmatched-degree scale of the legacy matching rule that discards
//!   both wedge edges, z' = 2 e^{-z^2} - 4 z^2, z(0) = 0. Increases to the
//!   root of its right-hand side, just below 0.5933.
//!
//! Solutions are produced by fixed-step classical Runge-Kutta with cubic
//! Hermite dense output, so evaluation anywhere in range is deterministic
//! and smooth enough for finite-difference residual checks.

use crate::{Error, Result};

/// Default integration step. Fourth-order error at this step is far below
/// every tolerance used by the consumers, and a solve over [0, 5] stays
/// around 50k nodes.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Largest series index the closed forms accept. Terms beyond this are below
/// 1e-80 for the whole y-domain and only invite factorial-overflow questions.
pub const SERIES_CAP: usize = 40;

/// Limit of the `Y` solution: the positive root of 6 e^{-x^2} - 4 = 0.
pub fn zeta() -> f64 {
    (1.5f64.ln()).sqrt()
}

/// Which scalar ODE a solution tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum OdeKind {
    /// Unmatched-degree scale of the packing process.
    Y,
    /// Accepted-edge scale of the triangle-free acceptance process.
    A,
    /// Unmatched-degree scale of the legacy discard-both-edges rule.
    Z,
}

impl OdeKind {
    pub fn label(self) -> &'static str {
        match self {
            OdeKind::Y => "y",
            OdeKind::A => "a",
            OdeKind::Z => "z",
        }
    }
}

/// Right-hand side of the chosen ODE at state `value`.
#[inline]
pub fn rhs(kind: OdeKind, value: f64) -> f64 {
    match kind {
        OdeKind::Y => 6.0 * (-value * value).exp() - 4.0,
        OdeKind::A => (-4.0 * value * value).exp(),
        OdeKind::Z => 2.0 * (-value * value).exp() - 4.0 * value * value,
    }
}

/// Dense solution on the uniform grid `t_i = i * h`, `i = 0..=steps`.
/// `values[i]` and `derivs[i]` are the RK4 state and the exact right-hand
/// side at node `i`; between nodes [`eval`](OdeSolution::eval) interpolates
/// with the cubic Hermite matching both endpoints and slopes.
#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub kind: OdeKind,
    pub h: f64,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
}

/// Integrates the chosen ODE from its zero initial condition to at least
/// `t_end` with fixed step `h` (classical RK4).
///
/// # Errors
/// `InvalidArgument` if `t_end` is negative or not finite, or `h` is not
/// strictly positive and finite.
pub fn integrate(kind: OdeKind, t_end: f64, h: f64) -> Result<OdeSolution> {
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "t_end must be finite and nonnegative, got {t_end}"
        )));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step h must be finite and positive, got {h}"
        )));
    }
    let steps = (t_end / h).ceil() as usize;
    let mut values = Vec::with_capacity(steps + 1);
    let mut derivs = Vec::with_capacity(steps + 1);
    let mut y = 0.0f64;
    values.push(y);
    derivs.push(rhs(kind, y));
    for _ in 0..steps {
        let k1 = rhs(kind, y);
        let k2 = rhs(kind, y + 0.5 * h * k1);
        let k3 = rhs(kind, y + 0.5 * h * k2);
        let k4 = rhs(kind, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        values.push(y);
        derivs.push(rhs(kind, y));
    }
    Ok(OdeSolution {
        kind,
        h,
        values,
        derivs,
    })
}

impl OdeSolution {
    /// Last grid time; `eval` accepts `[0, t_max]`.
    pub fn t_max(&self) -> f64 {
        self.h * (self.values.len() - 1) as f64
    }

    /// Value at time `t` (exact at nodes, cubic Hermite between them).
    ///
    /// # Errors
    /// `Domain` if `t` is outside `[0, t_max]` or not finite.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 || t > self.t_max() * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::Domain(format!(
                "t = {t} outside solution range [0, {}]",
                self.t_max()
            )));
        }
        let t = t.min(self.t_max());
        let last_seg = self.values.len() - 2;
        let i = ((t / self.h) as usize).min(last_seg);
        let s = (t - self.h * i as f64) / self.h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i], self.derivs[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Ok(h00 * y0 + h10 * self.h * d0 + h01 * y1 + h11 * self.h * d1)
    }

    /// Time derivative at `t`. For these autonomous equations the slope is
    /// the right-hand side at the interpolated value.
    pub fn deriv(&self, t: f64) -> Result<f64> {
        Ok(rhs(self.kind, self.eval(t)?))
    }
}

// ----------------------------------------------------------------------
// Closed-form statistics
// ----------------------------------------------------------------------

const FACTORIALS: [f64; SERIES_CAP + 1] = factorial_table();

const fn factorial_table() -> [f64; SERIES_CAP + 1] {
    let mut table = [1.0f64; SERIES_CAP + 1];
    let mut k = 1;
    while k <= SERIES_CAP {
        table[k] = table[k - 1] * k as f64;
        k += 1;
    }
    table
}

/// Closed-form evaluators at a fixed point `y` of the `Y` trajectory.
///
/// * `q(b, c)` — scaled density of vertices whose unmatched codegree with
///   the two pair endpoints is exactly `(b, c)`: e^{-2y^2} y^{2b+2c}/(b! c!).
/// * `r(c)` — scaled density of vertices at unmatched codegree exactly `c`
///   from a fixed vertex: e^{-y^2} y^{2c}/c!.
/// * `s(c)` — scaled count of unmatched neighbors at excluded codegree `c`
///   from the far endpoint: e^{-y^2} y^{2c+1}/c!.
/// * `alpha()` — rate 2 s(0) at which a pair gains surviving codegree.
/// * `kappa()` — weighted matching pressure on an unmatched edge,
///   2 (1 - e^{-y^2})/y, extended by continuity to 0 at y = 0.
#[derive(Clone, Copy, Debug)]
pub struct ClosedForms {
    pub y: f64,
}

/// Evaluators at scaled time position `y`.
///
/// # Errors
/// `Domain` if `y` is outside `[0, 1]` (the trajectory lives in
/// `[0, zeta()]`, and every bound used in tests holds on `[0, 1]`).
pub fn closed_forms_at(y: f64) -> Result<ClosedForms> {
    if !y.is_finite() || !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain(format!("y = {y} outside [0, 1]")));
    }
    Ok(ClosedForms { y })
}

impl ClosedForms {
    fn check_cap(idx: usize) -> Result<()> {
        if idx > SERIES_CAP {
            return Err(Error::InvalidArgument(format!(
                "series index {idx} exceeds cap {SERIES_CAP}"
            )));
        }
        Ok(())
    }

    pub fn q(&self, b: usize, c: usize) -> Result<f64> {
        Self::check_cap(b)?;
        Self::check_cap(c)?;
        let y2 = self.y * self.y;
        Ok((-2.0 * y2).exp() * y2.powi(b as i32 + c as i32) / (FACTORIALS[b] * FACTORIALS[c]))
    }

    pub fn r(&self, c: usize) -> Result<f64> {
        Self::check_cap(c)?;
        let y2 = self.y * self.y;
        Ok((-y2).exp() * y2.powi(c as i32) / FACTORIALS[c])
    }

    pub fn s(&self, c: usize) -> Result<f64> {
        Self::check_cap(c)?;
        let y2 = self.y * self.y;
        Ok((-y2).exp() * self.y * y2.powi(c as i32) / FACTORIALS[c])
    }

    pub fn alpha(&self) -> f64 {
        2.0 * (-self.y * self.y).exp() * self.y
    }

    pub fn kappa(&self) -> f64 {
        if self.y == 0.0 {
            0.0
        } else {
            2.0 * (1.0 - (-self.y * self.y).exp()) / self.y
        }
    }

    /// Series form of `kappa` truncated at the cap; used as an independent
    /// cross-check of the closed form.
    pub fn kappa_series(&self) -> f64 {
        let y2 = self.y * self.y;
        let mut sum = 0.0;
        for c in (0..=SERIES_CAP).rev() {
            sum += self.y * y2.powi(c as i32) / FACTORIALS[c] / (c as f64 + 1.0);
        }
        2.0 * (-y2).exp() * sum
    }
}

// ----------------------------------------------------------------------
// Master-equation residuals
// ----------------------------------------------------------------------

/// Residuals of the coupled evolution equations at one `(t, b, c)`, measured
/// by differencing the closed forms along the dense `Y` solution.
#[derive(Clone, Copy, Debug)]
pub struct MasterResidual {
    pub q: f64,
    pub r: f64,
    pub s: f64,
    /// True when `t` was too close to the solution boundary for a centered
    /// difference and a second-order one-sided stencil was used instead.
    pub one_sided: bool,
}

/// Finite-difference step for residual checks; small enough that the
/// truncation error sits far below the 1e-6 verification tolerance, large
/// enough to stay clear of cancellation noise.
pub const RESIDUAL_FD_STEP: f64 = 1e-5;

/// Checks that the closed forms satisfy their evolution equations along the
/// solved `Y` trajectory:
///
/// * dq_{b,c}/dt = 2 q_{b-1,c} alpha + 2 q_{b,c-1} alpha
///   + 4 (b+1) kappa q_{b+1,c} + 4 (c+1) kappa q_{b,c+1}
///   - 4 q_{b,c} (alpha + b kappa + c kappa)
/// * dr_c/dt = 2 r_{c-1} alpha + 4 (c+1) kappa r_{c+1} - (2 alpha + 4 c kappa) r_c
/// * ds_c/dt = 2 s_{c-1} alpha + 4 (c+1) kappa s_{c+1} + 2 q_{c,0}
///   - 2 (alpha + 2 c kappa + kappa) s_c
///
/// Negative-index terms are zero. The left side is a finite difference of
/// the closed form composed with the dense solution; the right side is
/// evaluated exactly at `y(t)`. Returns `rhs - lhs` for each family.
///
/// # Errors
/// `Domain` if `t` is outside the solution range; `InvalidArgument` if the
/// solution is not of kind `Y`, or `b`/`c` exceed the series cap less one
/// (the equations reference index `+1`).
pub fn master_equation_residual(
    sol: &OdeSolution,
    t: f64,
    b: usize,
    c: usize,
) -> Result<MasterResidual> {
    if sol.kind != OdeKind::Y {
        return Err(Error::InvalidArgument(
            "master equations are defined along the Y solution".into(),
        ));
    }
    if b + 1 > SERIES_CAP || c + 1 > SERIES_CAP {
        return Err(Error::InvalidArgument(format!(
            "equations reference series index {}, beyond cap {SERIES_CAP}",
            b.max(c) + 1
        )));
    }
    let d = RESIDUAL_FD_STEP;
    let t_max = sol.t_max();
    if t < 0.0 || t > t_max {
        return Err(Error::Domain(format!("t = {t} outside [0, {t_max}]")));
    }

    let q_of = |tt: f64| -> Result<f64> { closed_forms_at(sol.eval(tt)?)?.q(b, c) };
    let r_of = |tt: f64| -> Result<f64> { closed_forms_at(sol.eval(tt)?)?.r(c) };
    let s_of = |tt: f64| -> Result<f64> { closed_forms_at(sol.eval(tt)?)?.s(c) };

    // Derivative estimate: centered where possible, otherwise second-order
    // one-sided into the domain.
    let diff = |f: &dyn Fn(f64) -> Result<f64>| -> Result<(f64, bool)> {
        if t >= d && t + d <= t_max {
            Ok(((f(t + d)? - f(t - d)?) / (2.0 * d), false))
        } else if t + 2.0 * d <= t_max {
            Ok(((-3.0 * f(t)? + 4.0 * f(t + d)? - f(t + 2.0 * d)?) / (2.0 * d), true))
        } else if t >= 2.0 * d {
            Ok(((3.0 * f(t)? - 4.0 * f(t - d)? + f(t - 2.0 * d)?) / (2.0 * d), true))
        } else {
            Err(Error::Domain(
                "solution range too short for residual stencil".into(),
            ))
        }
    };

    let cf = closed_forms_at(sol.eval(t)?)?;
    let alpha = cf.alpha();
    let kappa = cf.kappa();
    let q = |bb: isize, cc: isize| -> Result<f64> {
        if bb < 0 || cc < 0 {
            Ok(0.0)
        } else {
            cf.q(bb as usize, cc as usize)
        }
    };
    let r = |cc: isize| -> Result<f64> {
        if cc < 0 {
            Ok(0.0)
        } else {
            cf.r(cc as usize)
        }
    };
    let s = |cc: isize| -> Result<f64> {
        if cc < 0 {
            Ok(0.0)
        } else {
            cf.s(cc as usize)
        }
    };
    let (bi, ci) = (b as isize, c as isize);
    let (bf, cf64) = (b as f64, c as f64);

    let q_rhs = 2.0 * q(bi - 1, ci)? * alpha
        + 2.0 * q(bi, ci - 1)? * alpha
        + 4.0 * (bf + 1.0) * kappa * q(bi + 1, ci)?
        + 4.0 * (cf64 + 1.0) * kappa * q(bi, ci + 1)?
        - 4.0 * q(bi, ci)? * (alpha + bf * kappa + cf64 * kappa);
    let r_rhs = 2.0 * r(ci - 1)? * alpha + 4.0 * (cf64 + 1.0) * kappa * r(ci + 1)?
        - (2.0 * alpha + 4.0 * cf64 * kappa) * r(ci)?;
    let s_rhs = 2.0 * s(ci - 1)? * alpha
        + 4.0 * (cf64 + 1.0) * kappa * s(ci + 1)?
        + 2.0 * q(ci, 0)?
        - 2.0 * (alpha + 2.0 * cf64 * kappa + kappa) * s(ci)?;

    let (q_lhs, one_sided) = diff(&q_of)?;
    let (r_lhs, _) = diff(&r_of)?;
    let (s_lhs, _) = diff(&s_of)?;

    Ok(MasterResidual {
        q: q_rhs - q_lhs,
        r: r_rhs - r_lhs,
        s: s_rhs - s_lhs,
        one_sided,
    })
}

// ----------------------------------------------------------------------
// Theoretical error band
// ----------------------------------------------------------------------

/// The concentration band shape from the asymptotic analysis:
/// f(t) = exp{(1000 ln n / ln ln n) t} * n^{-1/5}.
///
/// Exposed for reporting only: at any n a desk can simulate, the exponential
/// factor makes the band astronomically larger than 1, so empirical bands
/// are used as acceptance gates instead. May return `+inf` when the
/// exponential overflows; that is the honest value of the bound.
///
/// # Errors
/// `InvalidArgument` if `n < 10` (the nested logarithm must be safely
/// positive) or `t` is negative or not finite.
pub fn error_band(n: usize, t: f64) -> Result<f64> {
    if n < 10 {
        return Err(Error::InvalidArgument(format!(
            "error band requires n >= 10, got {n}"
        )));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "t must be finite and nonnegative, got {t}"
        )));
    }
    let ln_n = (n as f64).ln();
    Ok((1000.0 * ln_n / ln_n.ln() * t).exp() * (n as f64).powf(-0.2))
}

// ----------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    const Y_GRID: [f64; 7] = [0.0, 0.1, 0.25, 0.4, 0.55, 0.63, 1.0];

    // ---- fixed point and trajectory shape ----

    #[test]
    fn zeta_is_the_stationary_point() {
        assert!((rhs(OdeKind::Y, zeta())).abs() < 1e-15);
        assert!((zeta() - 0.636_76).abs() < 1e-4);
    }

    #[test]
    fn y_is_monotone_concave_and_bounded() {
        let sol = integrate(OdeKind::Y, 5.0, DEFAULT_STEP).unwrap();
        let z = zeta();
        for w in sol.values.windows(2) {
            assert!(w[1] >= w[0], "y must be nondecreasing");
        }
        // Concavity: slope along the trajectory never increases.
        for w in sol.derivs.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "y' must be nonincreasing");
        }
        for (&v, &d) in sol.values.iter().zip(&sol.derivs) {
            assert!((0.0..=z + 1e-12).contains(&v));
            assert!((0.0..=2.0).contains(&d));
        }
        let y5 = sol.eval(5.0).unwrap();
        assert!(y5 <= z && y5 >= z - 1e-4, "y(5) = {y5}, zeta = {z}");
    }

    #[test]
    fn a_is_monotone_unbounded_slope_in_unit_interval() {
        let sol = integrate(OdeKind::A, 4.0, DEFAULT_STEP).unwrap();
        for w in sol.values.windows(2) {
            assert!(w[1] > w[0]);
        }
        for &d in &sol.derivs {
            assert!(d > 0.0 && d <= 1.0);
        }
    }

    #[test]
    fn z_is_monotone_and_bounded() {
        let sol = integrate(OdeKind::Z, 5.0, DEFAULT_STEP).unwrap();
        for w in sol.values.windows(2) {
            assert!(w[1] >= w[0]);
        }
        let last = *sol.values.last().unwrap();
        assert!(last < 0.5933, "z limit exceeded: {last}");
        assert!(last > 0.59, "z should approach its fixed point, got {last}");
    }

    // ---- integrator accuracy ----

    #[test]
    fn step_halving_richardson() {
        for kind in [OdeKind::Y, OdeKind::A, OdeKind::Z] {
            let coarse = integrate(kind, 2.0, 2e-4).unwrap();
            let fine = integrate(kind, 2.0, 1e-4).unwrap();
            let d = (coarse.eval(2.0).unwrap() - fine.eval(2.0).unwrap()).abs();
            // RK4 halving: remaining error ~ d/15; both far below 1e-10.
            assert!(d < 1e-11, "{kind:?} halving gap {d}");
        }
    }

    #[test]
    fn dense_output_matches_refined_grid() {
        let sol = integrate(OdeKind::Y, 1.0, 1e-3).unwrap();
        let reference = integrate(OdeKind::Y, 1.0, 1e-5).unwrap();
        for i in 0..100 {
            let t = 0.01 * i as f64 + 0.0037;
            let d = (sol.eval(t).unwrap() - reference.eval(t).unwrap()).abs();
            assert!(d < 1e-10, "dense output error {d} at t = {t}");
        }
    }

    #[test]
    fn eval_is_exact_at_nodes() {
        let sol = integrate(OdeKind::Y, 0.5, 1e-3).unwrap();
        for i in (0..sol.values.len()).step_by(37) {
            let t = sol.h * i as f64;
            assert_eq!(sol.eval(t).unwrap(), sol.values[i]);
        }
    }

    #[test]
    fn domain_errors() {
        let sol = integrate(OdeKind::Y, 1.0, 1e-3).unwrap();
        assert!(sol.eval(-0.1).is_err());
        assert!(sol.eval(1.1).is_err());
        assert!(sol.eval(f64::NAN).is_err());
        assert!(integrate(OdeKind::Y, -1.0, 1e-3).is_err());
        assert!(integrate(OdeKind::Y, 1.0, 0.0).is_err());
        assert!(integrate(OdeKind::Y, 1.0, -1e-3).is_err());
        assert!(closed_forms_at(-0.2).is_err());
        assert!(closed_forms_at(1.2).is_err());
        assert!(closed_forms_at(f64::NAN).is_err());
    }

    // ---- closed forms ----

    #[test]
    fn closed_form_base_cases() {
        for &y in &Y_GRID {
            let cf = closed_forms_at(y).unwrap();
            let y2 = y * y;
            assert!((cf.q(0, 0).unwrap() - (-2.0 * y2).exp()).abs() < 1e-15);
            assert!((cf.r(0).unwrap() - (-y2).exp()).abs() < 1e-15);
            assert!((cf.s(0).unwrap() - (-y2).exp() * y).abs() < 1e-15);
            assert!((cf.alpha() - 2.0 * cf.s(0).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_bounds() {
        for &y in &Y_GRID {
            let cf = closed_forms_at(y).unwrap();
            for b in 0..=6 {
                for c in 0..=6 {
                    let bound = 1.0 / (FACTORIALS[b] * FACTORIALS[c]);
                    assert!(cf.q(b, c).unwrap() <= bound + 1e-15);
                }
                assert!(cf.r(b).unwrap() <= 1.0 / FACTORIALS[b] + 1e-15);
                assert!(cf.s(b).unwrap() <= 1.0 / FACTORIALS[b] + 1e-15);
            }
        }
    }

    #[test]
    fn closed_form_normalization_identities() {
        // sum_c r_c = 1, sum_{b,c} q_{b,c} = 1, sum_c s_c = y: exact Poisson
        // normalizations, so the capped tails must vanish numerically.
        for &y in &Y_GRID {
            let cf = closed_forms_at(y).unwrap();
            let mut r_sum = 0.0;
            let mut s_sum = 0.0;
            let mut q_sum = 0.0;
            for c in 0..=SERIES_CAP {
                r_sum += cf.r(c).unwrap();
                s_sum += cf.s(c).unwrap();
                for b in 0..=SERIES_CAP {
                    q_sum += cf.q(b, c).unwrap();
                }
            }
            assert!((r_sum - 1.0).abs() < 1e-12);
            assert!((s_sum - y).abs() < 1e-12);
            assert!((q_sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_closed_form_matches_series() {
        for &y in &Y_GRID {
            let cf = closed_forms_at(y).unwrap();
            assert!((cf.kappa() - cf.kappa_series()).abs() < 1e-13);
            // y * kappa(y) = 2 (1 - e^{-y^2})
            let lhs = y * cf.kappa();
            let rhs = 2.0 * (1.0 - (-y * y).exp());
            assert!((lhs - rhs).abs() < 1e-15);
        }
        assert_eq!(closed_forms_at(0.0).unwrap().kappa(), 0.0);
    }

    #[test]
    fn kappa_bounded_by_twice_zeta() {
        let z = zeta();
        for i in 0..=100 {
            let y = z * i as f64 / 100.0;
            let k = closed_forms_at(y).unwrap().kappa();
            assert!(k <= 2.0 * z + 1e-12 && 2.0 * z <= 2.0);
        }
    }

    #[test]
    fn series_cap_is_enforced() {
        let cf = closed_forms_at(0.5).unwrap();
        assert!(cf.q(SERIES_CAP + 1, 0).is_err());
        assert!(cf.r(SERIES_CAP + 1).is_err());
        assert!(cf.s(SERIES_CAP + 1).is_err());
        assert!(cf.q(SERIES_CAP, SERIES_CAP).is_ok());
    }

    // ---- master equations ----

    #[test]
    fn master_equation_residuals_vanish() {
        let sol = integrate(OdeKind::Y, 2.5, DEFAULT_STEP).unwrap();
        for &t in &[0.1, 0.5, 1.0, 2.0] {
            for b in 0..=3 {
                for c in 0..=3 {
                    let res = master_equation_residual(&sol, t, b, c).unwrap();
                    assert!(!res.one_sided);
                    assert!(res.q.abs() < 1e-6, "q residual {} at t={t} b={b} c={c}", res.q);
                    assert!(res.r.abs() < 1e-6, "r residual {} at t={t} c={c}", res.r);
                    assert!(res.s.abs() < 1e-6, "s residual {} at t={t} c={c}", res.s);
                }
            }
        }
    }

    #[test]
    fn master_equation_boundary_uses_one_sided_stencil() {
        let sol = integrate(OdeKind::Y, 1.0, DEFAULT_STEP).unwrap();
        let res = master_equation_residual(&sol, 0.0, 0, 0).unwrap();
        assert!(res.one_sided);
        assert!(res.q.abs() < 1e-6 && res.r.abs() < 1e-6 && res.s.abs() < 1e-6);
        let at_end = master_equation_residual(&sol, 1.0, 0, 0).unwrap();
        assert!(at_end.one_sided);
        assert!(master_equation_residual(&sol, 1.5, 0, 0).is_err());
    }

    // ---- error band ----

    #[test]
    fn error_band_shape() {
        // Monotone in t, vacuous (above 1) at desk scales once t is visible.
        let f0 = error_band(10_000, 0.0).unwrap();
        let f1 = error_band(10_000, 0.05).unwrap();
        let f2 = error_band(10_000, 0.5).unwrap();
        assert!(f0 < f1 && f1 < f2);
        assert!((f0 - (10_000f64).powf(-0.2)).abs() < 1e-15);
        assert!(f2 > 1.0, "band must be vacuous at desk scale, got {f2}");
        assert!(error_band(9, 0.1).is_err());
        assert!(error_band(100, -0.1).is_err());
    }
}
