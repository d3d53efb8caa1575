//! Repeated-sampling estimates of coverage probabilities.
//!
//! Replicate `r` draws its data from `derive_stream(master_seed, r)`, so each
//! replicate can be replayed alone and results do not depend on how
//! replicates are scheduled across worker threads.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::im::validity::report;
use crate::im::{fixed_s_region, ks_uniform, Association, Contour, PredictiveRandomSet, ValidityReport};
use crate::models::{
    expreg_interval, expreg_mle, expreg_sample, expreg_wald_interval, locscale_pl, locscale_sample,
    lognormal_mle_region, lognormal_naive_region, lognormal_pl, lognormal_sample, lognormal_stats, powerlaw_interval,
    powerlaw_sample, powerlaw_statistic, BaseDist, ExpRegAssociation, ExpRegData, LocScaleAssociation,
    LognormalAssociation, PivotTable, PowerLawAssociation,
};
use crate::numerics::{child_seed, derive_stream, RngState};

/// Smallest accepted replication count.
pub const MIN_REPS: usize = 100;

/// A data-generating model with its true parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    PowerLaw { n: usize, theta: f64, psi: f64 },
    ExpReg { x: Vec<f64>, theta: f64 },
    Lognormal { n: usize, mu: f64, sigma2: f64 },
    LocScale { n: usize, mu: f64, sigma: f64, base: BaseDist },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::PowerLaw { .. } => "powerlaw",
            ModelSpec::ExpReg { .. } => "expreg",
            ModelSpec::Lognormal { .. } => "lognormal",
            ModelSpec::LocScale { .. } => "locscale",
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be positive, got {v}")))
            }
        };
        let min_n = |n: usize, needed: usize| {
            if n >= needed {
                Ok(())
            } else {
                Err(Error::InsufficientData { needed, got: n })
            }
        };
        match self {
            ModelSpec::PowerLaw { n, theta, psi } => {
                min_n(*n, 2)?;
                positive(*theta, "theta")?;
                positive(*psi, "psi")
            }
            ModelSpec::ExpReg { x, theta } => {
                crate::models::expreg::validate_covariates(x)?;
                if theta.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("theta must be finite"))
                }
            }
            ModelSpec::Lognormal { n, mu, sigma2 } => {
                min_n(*n, 2)?;
                if !mu.is_finite() {
                    return Err(Error::domain("mu must be finite"));
                }
                positive(*sigma2, "sigma2")
            }
            ModelSpec::LocScale { n, mu, sigma, .. } => {
                min_n(*n, 1)?;
                if !mu.is_finite() {
                    return Err(Error::domain("mu must be finite"));
                }
                positive(*sigma, "sigma")
            }
        }
    }
}

/// The confidence region whose coverage is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `{pl > α}` under the model's shipped random set.
    Plausibility,
    /// `θ̂ ± z/√I(θ̂)` (exponential regression).
    Wald,
    /// Wald ellipse around the MLE (lognormal).
    MleEllipse,
    /// Bonferroni product of `t` and `χ²` intervals (lognormal).
    NaiveRect,
    /// The closed region from the smallest `1 − α` random-set realization.
    FixedS,
    /// The whole parameter space; coverage is 1 by construction.
    Whole,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Plausibility => "plausibility",
            Method::Wald => "wald",
            Method::MleEllipse => "mle_ellipse",
            Method::NaiveRect => "naive_rect",
            Method::FixedS => "fixed_s",
            Method::Whole => "whole",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "plausibility" => Method::Plausibility,
            "wald" => Method::Wald,
            "mle_ellipse" => Method::MleEllipse,
            "naive_rect" => Method::NaiveRect,
            "fixed_s" => Method::FixedS,
            "whole" => Method::Whole,
            other => return Err(Error::domain(format!("unknown method `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSpec {
    pub model: ModelSpec,
    pub method: Method,
    pub alpha: f64,
    pub reps: usize,
    pub master_seed: u64,
    /// Pivot draws per replicate for exponential regression.
    pub mc_size: usize,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl CoverageSpec {
    pub fn new(model: ModelSpec, method: Method, alpha: f64, reps: usize, master_seed: u64) -> Self {
        Self { model, method, alpha, reps, master_seed, mc_size: crate::models::DEFAULT_TABLE_SIZE, workers: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        crate::numerics::dist::check_open_unit(self.alpha, "alpha")?;
        if self.reps < MIN_REPS {
            return Err(Error::domain(format!("reps must be at least {MIN_REPS}, got {}", self.reps)));
        }
        self.model.validate()?;
        let supported = matches!(
            (&self.model, self.method),
            (_, Method::Plausibility | Method::FixedS | Method::Whole)
                | (ModelSpec::ExpReg { .. }, Method::Wald)
                | (ModelSpec::Lognormal { .. }, Method::MleEllipse | Method::NaiveRect)
        );
        if !supported {
            return Err(Error::domain(format!(
                "method {} is not available for model {}",
                self.method,
                self.model.name()
            )));
        }
        if let ModelSpec::ExpReg { .. } = self.model {
            if matches!(self.method, Method::Plausibility | Method::FixedS) && self.alpha * (self.mc_size as f64) < 1.0
            {
                return Err(Error::Resolution { alpha_b: self.alpha * self.mc_size as f64 });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub spec: CoverageSpec,
    pub estimate: f64,
    pub stderr: f64,
    pub hits: usize,
    pub wall_time: Duration,
}

impl CoverageReport {
    pub const CSV_HEADER: &'static str = "method,alpha,reps,estimate,stderr,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{}",
            self.spec.method, self.spec.alpha, self.spec.reps, self.estimate, self.stderr, self.spec.master_seed
        )
    }

    /// Header plus one row; wall time is left out so reruns compare equal.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        writeln!(out, "{}", self.csv_row())?;
        Ok(())
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model      {}", self.spec.model.name())?;
        writeln!(f, "method     {}", self.spec.method)?;
        writeln!(f, "level      {}", 1.0 - self.spec.alpha)?;
        writeln!(f, "reps       {}", self.spec.reps)?;
        writeln!(f, "coverage   {:.4} (stderr {:.4})", self.estimate, self.stderr)?;
        writeln!(f, "seed       {}", self.spec.master_seed)?;
        write!(f, "wall time  {:.2?}", self.wall_time)
    }
}

/// Runs `job` on a pool of `workers` threads, or on the global pool when 0.
pub fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Runs every replicate and averages truth membership.
pub fn run_coverage(spec: &CoverageSpec) -> Result<CoverageReport> {
    spec.validate()?;
    let start = Instant::now();
    let seed = spec.master_seed;
    let flags = with_workers(spec.workers, || {
        (0..spec.reps as u64)
            .into_par_iter()
            .map(|r| covers(spec, r).map_err(|e| Error::Replicate { replicate: r, seed, source: Box::new(e) }))
            .collect::<Result<Vec<bool>>>()
    })??;
    let hits = flags.iter().filter(|&&c| c).count();
    let p = hits as f64 / spec.reps as f64;
    Ok(CoverageReport {
        spec: spec.clone(),
        estimate: p,
        stderr: (p * (1.0 - p) / spec.reps as f64).sqrt(),
        hits,
        wall_time: start.elapsed(),
    })
}

/// Whether replicate `r` covers the truth. Public so that a failing replicate
/// can be replayed in isolation.
pub fn covers(spec: &CoverageSpec, r: u64) -> Result<bool> {
    if spec.method == Method::Whole {
        return Ok(true);
    }
    let alpha = spec.alpha;
    let mut rng = derive_stream(spec.master_seed, r);
    match &spec.model {
        &ModelSpec::PowerLaw { n, theta, psi } => {
            let t = powerlaw_statistic(&powerlaw_sample(theta, psi, n, &mut rng)?);
            match spec.method {
                Method::Plausibility => Ok(powerlaw_interval(t, n, alpha)?.contains(theta)),
                _ => Ok(fixed_s_region(&PowerLawAssociation { n }, t, alpha)?.contains(theta)),
            }
        }
        ModelSpec::ExpReg { x, theta } => {
            let data = ExpRegData::new(x.clone(), expreg_sample(*theta, x, &mut rng))?;
            if spec.method == Method::Wald {
                return Ok(expreg_wald_interval(&data, alpha)?.contains(*theta));
            }
            let t = expreg_mle(&data)?;
            let table = PivotTable::build(x, spec.mc_size, child_seed(spec.master_seed, r))?;
            match spec.method {
                Method::Plausibility => Ok(expreg_interval(t, alpha, &table)?.contains(*theta)),
                _ => Ok(fixed_s_region(&ExpRegAssociation { table: &table }, t, alpha)?.contains(*theta)),
            }
        }
        &ModelSpec::Lognormal { n, mu, sigma2 } => {
            let stats = lognormal_stats(&lognormal_sample(n, mu, sigma2, &mut rng))?;
            match spec.method {
                Method::Plausibility => Ok(lognormal_pl(&stats, mu, sigma2)? > alpha),
                Method::FixedS => Ok(lognormal_pl(&stats, mu, sigma2)? >= alpha),
                Method::MleEllipse => Ok(lognormal_mle_region(&stats, alpha)?.contains(mu, sigma2)),
                _ => Ok(lognormal_naive_region(&stats, alpha)?.contains(mu, sigma2)),
            }
        }
        &ModelSpec::LocScale { n, mu, sigma, base } => {
            let y = locscale_sample(n, mu, sigma, base, &mut rng)?;
            let pl = locscale_pl(&y, mu, sigma, base)?;
            Ok(if spec.method == Method::FixedS { pl >= alpha } else { pl > alpha })
        }
    }
}

/// Simulates `T` at the truth `reps` times and tests `pl_T(truth)` against
/// `Unif(0, 1)` with the Kolmogorov statistics.
///
/// `contour` replaces the model's shipped random set, e.g. to confirm that an
/// invalid contour is detected. Exponential regression is rejected because its
/// Monte Carlo plausibility is discrete.
pub fn uniformity_check(
    model: &ModelSpec,
    reps: usize,
    seed: u64,
    contour: Option<&dyn Contour>,
) -> Result<ValidityReport> {
    model.validate()?;
    if reps < crate::im::validity::MIN_DRAWS {
        return Err(Error::domain(format!(
            "uniformity check needs at least {} draws, got {reps}",
            crate::im::validity::MIN_DRAWS
        )));
    }
    let shipped = match model {
        ModelSpec::PowerLaw { .. } => PredictiveRandomSet::Default1D,
        ModelSpec::Lognormal { .. } => PredictiveRandomSet::box2d(),
        ModelSpec::LocScale { n, .. } => PredictiveRandomSet::Box { dim: *n },
        ModelSpec::ExpReg { .. } => {
            return Err(Error::domain(
                "uniformity check needs a continuous statistic; expreg plausibility is a Monte Carlo step function",
            ))
        }
    };
    let contour: &dyn Contour = contour.unwrap_or(&shipped);
    let mut values = (0..reps as u64)
        .into_par_iter()
        .map(|r| contour.contour(&aux_point(model, &mut derive_stream(seed, r))?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(report(ks_uniform(&mut values)))
}

fn aux_point(model: &ModelSpec, rng: &mut RngState) -> Result<Vec<f64>> {
    match model {
        &ModelSpec::PowerLaw { n, theta, psi } => {
            let t = powerlaw_statistic(&powerlaw_sample(theta, psi, n, rng)?);
            PowerLawAssociation { n }.inverse(&t, &theta)
        }
        &ModelSpec::Lognormal { n, mu, sigma2 } => {
            let s = lognormal_stats(&lognormal_sample(n, mu, sigma2, rng))?;
            LognormalAssociation { n }.inverse(&(s.t1, s.t2), &(mu, sigma2))
        }
        &ModelSpec::LocScale { n, mu, sigma, base } => {
            let y = locscale_sample(n, mu, sigma, base, rng)?;
            LocScaleAssociation { n, base }.inverse(&y, &(mu, sigma))
        }
        ModelSpec::ExpReg { .. } => unreachable!("rejected by uniformity_check"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::im::ShrunkenDefault;

    fn lognormal() -> ModelSpec {
        ModelSpec::Lognormal { n: 25, mu: 0.0, sigma2: 1.0 }
    }

    #[test]
    fn whole_space_covers_always() {
        let r = run_coverage(&CoverageSpec::new(lognormal(), Method::Whole, 0.1, 200, 1)).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn spec_validation() {
        assert!(run_coverage(&CoverageSpec::new(lognormal(), Method::Wald, 0.1, 200, 1)).is_err());
        assert!(run_coverage(&CoverageSpec::new(lognormal(), Method::Plausibility, 0.1, 50, 1)).is_err());
        assert!(run_coverage(&CoverageSpec::new(lognormal(), Method::Plausibility, 1.0, 200, 1)).is_err());
        let mut tiny = CoverageSpec::new(
            ModelSpec::ExpReg { x: vec![1.0, 2.0], theta: 1.0 },
            Method::Plausibility,
            0.0001,
            200,
            1,
        );
        tiny.mc_size = 1000;
        assert!(matches!(run_coverage(&tiny), Err(Error::Resolution { .. })));
    }

    #[test]
    fn powerlaw_coverage_is_exact() {
        let spec =
            CoverageSpec::new(ModelSpec::PowerLaw { n: 5, theta: 2.0, psi: 1.0 }, Method::Plausibility, 0.1, 4000, 3);
        let r = run_coverage(&spec).unwrap();
        assert!((r.estimate - 0.9).abs() <= 3.0 * r.stderr, "{r}");
        let fixed = run_coverage(&CoverageSpec { method: Method::FixedS, ..spec }).unwrap();
        assert!((fixed.estimate - r.estimate).abs() <= 2.0 * r.stderr);
    }

    #[test]
    fn locscale_coverage_is_exact() {
        for base in [BaseDist::Normal, BaseDist::Logistic] {
            let spec = CoverageSpec::new(
                ModelSpec::LocScale { n: 4, mu: 1.0, sigma: 2.0, base },
                Method::Plausibility,
                0.2,
                4000,
                11,
            );
            let r = run_coverage(&spec).unwrap();
            assert!((r.estimate - 0.8).abs() <= 3.0 * r.stderr, "{r}");
        }
    }

    #[test]
    fn report_csv() {
        let r = run_coverage(&CoverageSpec::new(lognormal(), Method::Whole, 0.1, 100, 42)).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "method,alpha,reps,estimate,stderr,seed\nwhole,0.1,100,1.000000,0.000000,42\n"
        );
    }

    #[test]
    fn replicate_replay_matches_run() {
        let spec = CoverageSpec::new(lognormal(), Method::Plausibility, 0.1, 300, 5);
        let run = run_coverage(&spec).unwrap();
        let replayed = (0..300).filter(|&r| covers(&spec, r).unwrap()).count();
        assert_eq!(run.hits, replayed);
    }

    #[test]
    fn uniformity_of_shipped_sets_and_failure_of_shrunken() {
        let pl = ModelSpec::PowerLaw { n: 5, theta: 2.0, psi: 1.0 };
        let ok = uniformity_check(&pl, 20_000, 9, None).unwrap();
        assert!(ok.pass && ok.exact, "{ok:?}");
        let bad = uniformity_check(&pl, 20_000, 9, Some(&ShrunkenDefault)).unwrap();
        assert!(!bad.pass, "{bad:?}");
        assert!(uniformity_check(&ModelSpec::ExpReg { x: vec![1.0], theta: 0.0 }, 5000, 1, None).is_err());
    }

    #[test]
    fn uniformity_is_deterministic() {
        let a = uniformity_check(&lognormal(), 2000, 4, None).unwrap();
        let b = uniformity_check(&lognormal(), 2000, 4, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn method_names_round_trip() {
        for m in
            [Method::Plausibility, Method::Wald, Method::MleEllipse, Method::NaiveRect, Method::FixedS, Method::Whole]
        {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
    }
}
