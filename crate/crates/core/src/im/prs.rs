//! Nested predictive random sets, represented by their contour functions.
//!
//! Every family here has realizations `S(m) = {u : h(u) <= m}` indexed by a
//! scalar level `m`, so the support is totally ordered by inclusion and the
//! contour `f(u) = P{h(U) >= h(u)}` determines the whole distribution.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::RngState;

/// Anything that maps an auxiliary point to `[0, 1]` like a contour function.
pub trait Contour: Send + Sync {
    /// Dimension of the auxiliary space, or `None` if any dimension is accepted.
    fn dim(&self) -> Option<usize>;
    fn contour(&self, u: &[f64]) -> Result<f64>;
}

/// Draws auxiliary variables `U ~ P_U`.
pub trait AuxSampler: Send + Sync {
    fn dim(&self) -> usize;
    fn sample(&self, rng: &mut RngState, out: &mut [f64]);
}

/// Independent `Unif(0, 1)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformCube {
    pub dim: usize,
}

impl AuxSampler for UniformCube {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, rng: &mut RngState, out: &mut [f64]) {
        rng.fill_uniform(out);
    }
}

type RealFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `S = {u : h(u) <= h(U)}` for a user-supplied `h`.
///
/// `h` must be continuous and constant only on `P_U`-null sets; this is not
/// checked. If `closed_form` is given it must equal `P{h(U) >= h(u)}` under the
/// sampler the set is used with.
#[derive(Clone)]
pub struct GeneralizedH {
    pub label: String,
    pub dim: usize,
    pub h: RealFn,
    pub closed_form: Option<RealFn>,
}

impl fmt::Debug for GeneralizedH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralizedH")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum PredictiveRandomSet {
    /// `{u : |u − ½| <= |U − ½|}` on (0, 1).
    Default1D,
    /// `{u : max_i |u_i − ½| <= max_i |U_i − ½|}` on `(0, 1)^dim`.
    Box {
        dim: usize,
    },
    GeneralizedH(GeneralizedH),
}

impl PredictiveRandomSet {
    pub fn box2d() -> Self {
        PredictiveRandomSet::Box { dim: 2 }
    }

    pub fn generalized(
        label: impl Into<String>,
        dim: usize,
        h: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PredictiveRandomSet::GeneralizedH(GeneralizedH { label: label.into(), dim, h: Arc::new(h), closed_form: None })
    }

    pub fn aux_dim(&self) -> usize {
        match self {
            PredictiveRandomSet::Default1D => 1,
            PredictiveRandomSet::Box { dim } => *dim,
            PredictiveRandomSet::GeneralizedH(g) => g.dim,
        }
    }

    /// The nesting index `h(u)`; realizations are sublevel sets of it.
    pub fn index(&self, u: &[f64]) -> f64 {
        match self {
            PredictiveRandomSet::Default1D => (u[0] - 0.5).abs(),
            PredictiveRandomSet::Box { .. } => u.iter().fold(0.0, |m, &v| f64::max(m, (v - 0.5).abs())),
            PredictiveRandomSet::GeneralizedH(g) => (g.h)(u),
        }
    }

    pub fn has_closed_form(&self) -> bool {
        match self {
            PredictiveRandomSet::GeneralizedH(g) => g.closed_form.is_some(),
            _ => true,
        }
    }

    /// Membership of `u` in the realization at level `level`.
    pub fn contains(&self, u: &[f64], level: f64) -> bool {
        self.index(u) <= level
    }

    /// The realization generated by the auxiliary draw `draw`.
    pub fn realization_contains(&self, draw: &[f64], u: &[f64]) -> bool {
        self.contains(u, self.index(draw))
    }

    fn check_point(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.aux_dim() {
            return Err(Error::domain(format!(
                "auxiliary point has dimension {}, set expects {}",
                u.len(),
                self.aux_dim()
            )));
        }
        Ok(())
    }
}

impl Contour for PredictiveRandomSet {
    fn dim(&self) -> Option<usize> {
        Some(self.aux_dim())
    }

    fn contour(&self, u: &[f64]) -> Result<f64> {
        self.check_point(u)?;
        match self {
            PredictiveRandomSet::Default1D => contour_default(u[0]),
            PredictiveRandomSet::Box { .. } => contour_box_n(u),
            PredictiveRandomSet::GeneralizedH(g) => match &g.closed_form {
                Some(f) => Ok(f(u)),
                None => Err(Error::Model(format!(
                    "set `{}` has no closed-form contour; estimate it with contour_h",
                    g.label
                ))),
            },
        }
    }
}

fn check_unit(u: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) {
        Ok(())
    } else {
        Err(Error::domain(format!("auxiliary coordinate must lie in [0, 1], got {u}")))
    }
}

/// Contour of the default set: `1 − |2u − 1|`.
pub fn contour_default(u: f64) -> Result<f64> {
    check_unit(u)?;
    Ok(1.0 - (2.0 * u - 1.0).abs())
}

/// Contour of the two-dimensional box set: `1 − max(|2u₁ − 1|, |2u₂ − 1|)²`.
pub fn contour_box(u1: f64, u2: f64) -> Result<f64> {
    contour_box_n(&[u1, u2])
}

/// Box contour in any dimension `d`: `1 − max_i |2u_i − 1|^d`.
pub fn contour_box_n(u: &[f64]) -> Result<f64> {
    let mut m: f64 = 0.0;
    for &v in u {
        check_unit(v)?;
        m = m.max((2.0 * v - 1.0).abs());
    }
    Ok(1.0 - m.powi(u.len() as i32))
}

/// A contour value together with its Monte Carlo standard error (zero when
/// exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourEstimate {
    pub value: f64,
    pub std_error: f64,
    pub exact: bool,
}

/// Evaluates `f(u) = P{h(u) <= h(U)}`.
///
/// Closed forms are used for the default and box sets and for generalized
/// sets that register one. Otherwise `b` draws from `sampler` give a Monte
/// Carlo estimate whose standard error is at most `1 / (2√b)`.
pub fn contour_h(
    u: &[f64],
    prs: &PredictiveRandomSet,
    sampler: &dyn AuxSampler,
    b: usize,
    rng: &mut RngState,
) -> Result<ContourEstimate> {
    if b == 0 {
        return Err(Error::domain("Monte Carlo size must be positive"));
    }
    if prs.has_closed_form() {
        let value = prs.contour(u)?;
        return Ok(ContourEstimate { value, std_error: 0.0, exact: true });
    }
    if sampler.dim() != prs.aux_dim() {
        return Err(Error::domain("sampler and set dimensions differ"));
    }
    let level = prs.index(u);
    let mut draw = vec![0.0; sampler.dim()];
    let mut hits = 0usize;
    for _ in 0..b {
        sampler.sample(rng, &mut draw);
        if prs.index(&draw) >= level {
            hits += 1;
        }
    }
    let p = hits as f64 / b as f64;
    Ok(ContourEstimate { value: p, std_error: (p * (1.0 - p) / b as f64).sqrt(), exact: false })
}

/// The deliberately invalid contour `(1 − |2u − 1|)²`, which is stochastically
/// smaller than uniform. Used to check that diagnostics reject bad sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShrunkenDefault;

impl Contour for ShrunkenDefault {
    fn dim(&self) -> Option<usize> {
        Some(1)
    }

    fn contour(&self, u: &[f64]) -> Result<f64> {
        Ok(contour_default(u[0])?.powi(2))
    }
}

/// Squares any contour; the result is never valid when the input is exact.
pub struct Squared<C>(pub C);

impl<C: Contour> Contour for Squared<C> {
    fn dim(&self) -> Option<usize> {
        self.0.dim()
    }

    fn contour(&self, u: &[f64]) -> Result<f64> {
        Ok(self.0.contour(u)?.powi(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::derive_stream;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn default_contour_values() {
        assert_eq!(contour_default(0.5).unwrap(), 1.0);
        assert_eq!(contour_default(0.0).unwrap(), 0.0);
        assert_eq!(contour_default(1.0).unwrap(), 0.0);
        assert_eq!(contour_default(0.25).unwrap(), 0.5);
        assert!(contour_default(1.2).is_err());
        assert!(contour_default(-0.1).is_err());
    }

    #[test]
    fn box_contour_values() {
        assert_eq!(contour_box(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(contour_box(0.0, 0.7).unwrap(), 0.0);
        assert_abs_diff_eq!(contour_box(0.25, 0.5).unwrap(), 0.75, epsilon = 1e-15);
        assert!(contour_box(0.5, 1.5).is_err());
    }

    #[test]
    fn box_contour_matches_membership_simulation() {
        // P{max(|U1−½|,|U2−½|) >= ¼} by brute force.
        let mut rng = derive_stream(3, 0);
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| {
                let (a, b) = (rng.uniform(), rng.uniform());
                (a - 0.5).abs().max((b - 0.5).abs()) >= 0.25
            })
            .count();
        let p = hits as f64 / n as f64;
        let sd = (0.75f64 * 0.25 / n as f64).sqrt();
        assert!((p - 0.75).abs() < 3.0 * sd, "{p}");
    }

    #[test]
    fn generalized_h_recovers_default() {
        let prs = PredictiveRandomSet::generalized("abs-center", 1, |u| (u[0] - 0.5).abs());
        let sampler = UniformCube { dim: 1 };
        let mut rng = derive_stream(8, 0);
        for &u in &[0.05, 0.3, 0.5, 0.81] {
            let est = contour_h(&[u], &prs, &sampler, 200_000, &mut rng).unwrap();
            assert!(!est.exact);
            assert!(est.std_error <= 1.0 / (2.0 * (200_000f64).sqrt()));
            let exact = contour_default(u).unwrap();
            assert!((est.value - exact).abs() <= 3.0 * est.std_error.max(1e-4), "{u}");
        }
    }

    #[test]
    fn generalized_h_recovers_box() {
        let prs = PredictiveRandomSet::generalized("max-center", 2, |u| (u[0] - 0.5).abs().max((u[1] - 0.5).abs()));
        let sampler = UniformCube { dim: 2 };
        let mut rng = derive_stream(9, 0);
        for &(a, b) in &[(0.25, 0.5), (0.1, 0.6), (0.45, 0.52)] {
            let est = contour_h(&[a, b], &prs, &sampler, 200_000, &mut rng).unwrap();
            let exact = contour_box(a, b).unwrap();
            assert!((est.value - exact).abs() <= 3.0 * est.std_error.max(1e-4));
        }
    }

    #[test]
    fn shift_of_h_changes_nothing() {
        let base = PredictiveRandomSet::generalized("h", 1, |u| (u[0] - 0.5).abs());
        let shifted = PredictiveRandomSet::generalized("h+3", 1, |u| (u[0] - 0.5).abs() + 3.0);
        let sampler = UniformCube { dim: 1 };
        for &u in &[0.1, 0.4, 0.77] {
            let a = contour_h(&[u], &base, &sampler, 10_000, &mut derive_stream(1, 1)).unwrap();
            let b = contour_h(&[u], &shifted, &sampler, 10_000, &mut derive_stream(1, 1)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn closed_forms_are_exact() {
        let sampler = UniformCube { dim: 2 };
        let est =
            contour_h(&[0.25, 0.5], &PredictiveRandomSet::box2d(), &sampler, 1, &mut derive_stream(0, 0)).unwrap();
        assert!(est.exact);
        assert_eq!(est.value, 0.75);
        assert!(contour_h(&[0.5], &PredictiveRandomSet::Default1D, &sampler, 0, &mut derive_stream(0, 0)).is_err());
    }

    proptest! {
        #[test]
        fn realizations_are_nested(u in 0.0f64..1.0, v in 0.0f64..1.0, m1 in 0.0f64..0.5, m2 in 0.0f64..0.5) {
            let (lo, hi) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
            for prs in [PredictiveRandomSet::Default1D, PredictiveRandomSet::box2d()] {
                let point: Vec<f64> = if prs.aux_dim() == 1 { vec![u] } else { vec![u, v] };
                if prs.contains(&point, lo) {
                    prop_assert!(prs.contains(&point, hi));
                }
            }
        }

        #[test]
        fn contour_in_unit_range(u in 0.0f64..=1.0, v in 0.0f64..=1.0) {
            let a = contour_default(u).unwrap();
            let b = contour_box(u, v).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!((0.0..=1.0).contains(&b));
        }
    }
}
