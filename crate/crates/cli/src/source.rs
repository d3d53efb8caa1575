//! Turning command-line flags into observed statistics or a true model.

use plausets_core::coverage::ModelSpec;
use plausets_core::io;
use plausets_core::models::{
    expreg_mle, expreg_sample, locscale_sample, lognormal_sample, lognormal_stats, powerlaw_sample, powerlaw_statistic,
    BaseDist, ExpRegData, LognormalStats,
};
use plausets_core::numerics::derive_stream;
use plausets_core::{Error, Result};

use crate::{Base, ModelArgs, ModelId};

/// What a 1-D or 2-D command needs from the data.
pub enum Observed {
    PowerLaw { t: f64, n: usize },
    ExpReg { t: f64, x: Vec<f64>, data: Option<ExpRegData> },
    Lognormal(LognormalStats),
    LocScale { y: Vec<f64>, base: BaseDist },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn need<T: Copy>(v: Option<T>, flag: &str, model: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required for synthetic {model} data")))
}

pub fn base(b: Base) -> BaseDist {
    match b {
        Base::Normal => BaseDist::Normal,
        Base::Logistic => BaseDist::Logistic,
    }
}

pub fn model_name(m: ModelId) -> &'static str {
    match m {
        ModelId::Powerlaw => "powerlaw",
        ModelId::Expreg => "expreg",
        ModelId::Lognormal => "lognormal",
        ModelId::Locscale => "locscale",
    }
}

/// Covariates from `--xspec`, or `1..=n`.
pub fn covariates(m: &ModelArgs) -> Result<Vec<f64>> {
    let x = match (&m.xspec, m.n) {
        (Some(spec), _) => parse_xspec(spec)?,
        (None, Some(n)) => (1..=n).map(|i| i as f64).collect(),
        (None, None) => return Err(usage("expreg needs --xspec or --n")),
    };
    if let Some(n) = m.n {
        if n != x.len() {
            return Err(usage(format!("--n {n} disagrees with {} covariates in --xspec", x.len())));
        }
    }
    Ok(x)
}

fn parse_xspec(spec: &str) -> Result<Vec<f64>> {
    let bad = || usage(format!("invalid --xspec `{spec}`; use `a:b` (integers) or a comma list"));
    if let Some((a, b)) = spec.split_once(':') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).map(|i| i as f64).collect());
    }
    spec.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad())).collect()
}

/// Parses `lo:hi:steps`.
pub fn parse_grid(spec: &str) -> Result<(f64, f64, usize)> {
    let bad = || usage(format!("invalid grid `{spec}`; expected lo:hi:steps with lo < hi and steps >= 2"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) || steps < 2 {
        return Err(bad());
    }
    Ok((lo, hi, steps))
}

pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|i| if i + 1 == steps { hi } else { lo + h * i as f64 }).collect()
}

fn reject_with_data(m: &ModelArgs) -> Result<()> {
    let synthetic = [
        (m.t.is_some(), "t"),
        (m.theta.is_some(), "theta"),
        (m.mu.is_some(), "mu"),
        (m.sigma2.is_some(), "sigma2"),
        (m.sigma.is_some(), "sigma"),
        (m.n.is_some(), "n"),
        (m.xspec.is_some(), "xspec"),
    ];
    if let Some((_, flag)) = synthetic.iter().find(|(set, _)| *set) {
        return Err(usage(format!("--data cannot be combined with --{flag}")));
    }
    Ok(())
}

/// Observed statistics from `--data`, `--t`, or synthetic flags drawn from
/// stream 0 of `seed`.
pub fn observe(m: &ModelArgs, seed: u64) -> Result<Observed> {
    let mut rng = derive_stream(seed, 0);
    if let Some(path) = &m.data {
        reject_with_data(m)?;
        return Ok(match m.model {
            ModelId::Powerlaw => {
                let d = io::read_powerlaw_file(path)?;
                Observed::PowerLaw { t: powerlaw_statistic(&d), n: d.n() }
            }
            ModelId::Expreg => {
                let d = io::read_expreg_file(path)?;
                Observed::ExpReg { t: expreg_mle(&d)?, x: d.x().to_vec(), data: Some(d) }
            }
            ModelId::Lognormal => Observed::Lognormal(lognormal_stats(&io::read_observations_file(path)?)?),
            ModelId::Locscale => Observed::LocScale { y: io::read_observations_file(path)?, base: base(m.base) },
        });
    }
    let name = model_name(m.model);
    match m.model {
        ModelId::Powerlaw => {
            let n = need(m.n, "n", name)?;
            match (m.t, m.theta) {
                (Some(t), None) => Ok(Observed::PowerLaw { t, n }),
                (None, Some(theta)) => {
                    let d = powerlaw_sample(theta, m.psi, n, &mut rng)?;
                    Ok(Observed::PowerLaw { t: powerlaw_statistic(&d), n })
                }
                _ => Err(usage("powerlaw needs exactly one of --t or --theta (or --data)")),
            }
        }
        ModelId::Expreg => {
            let x = covariates(m)?;
            match (m.t, m.theta) {
                (Some(t), None) => Ok(Observed::ExpReg { t, x, data: None }),
                (None, Some(theta)) => {
                    let d = ExpRegData::new(x.clone(), expreg_sample(theta, &x, &mut rng))?;
                    Ok(Observed::ExpReg { t: expreg_mle(&d)?, x, data: Some(d) })
                }
                _ => Err(usage("expreg needs exactly one of --t or --theta (or --data)")),
            }
        }
        ModelId::Lognormal => {
            let n = need(m.n, "n", name)?;
            let y = lognormal_sample(n, need(m.mu, "mu", name)?, need(m.sigma2, "sigma2", name)?, &mut rng);
            Ok(Observed::Lognormal(lognormal_stats(&y)?))
        }
        ModelId::Locscale => {
            let n = need(m.n, "n", name)?;
            let b = base(m.base);
            let y = locscale_sample(n, need(m.mu, "mu", name)?, need(m.sigma, "sigma", name)?, b, &mut rng)?;
            Ok(Observed::LocScale { y, base: b })
        }
    }
}

/// The data-generating model for `coverage` and `validity`.
pub fn truth(m: &ModelArgs) -> Result<ModelSpec> {
    if m.data.is_some() || m.t.is_some() {
        return Err(usage("simulation commands take the true parameters, not --data or --t"));
    }
    let name = model_name(m.model);
    Ok(match m.model {
        ModelId::Powerlaw => {
            ModelSpec::PowerLaw { n: need(m.n, "n", name)?, theta: need(m.theta, "theta", name)?, psi: m.psi }
        }
        ModelId::Expreg => ModelSpec::ExpReg { x: covariates(m)?, theta: need(m.theta, "theta", name)? },
        ModelId::Lognormal => ModelSpec::Lognormal {
            n: need(m.n, "n", name)?,
            mu: need(m.mu, "mu", name)?,
            sigma2: need(m.sigma2, "sigma2", name)?,
        },
        ModelId::Locscale => ModelSpec::LocScale {
            n: need(m.n, "n", name)?,
            mu: need(m.mu, "mu", name)?,
            sigma: need(m.sigma, "sigma", name)?,
            base: base(m.base),
        },
    })
}
