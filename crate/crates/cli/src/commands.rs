use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use plausets_core::coverage::{run_coverage, uniformity_check, with_workers, CoverageSpec, Method, ModelSpec};
use plausets_core::im::{fixed_s_region, Contour, CurveMeta, PlausibilityCurve, PredictiveRandomSet, Squared};
use plausets_core::models::{
    expreg_interval, expreg_peak, expreg_pl, expreg_pl_per_theta, expreg_wald_interval, locscale_pl,
    lognormal_auto_bounds, lognormal_pl, powerlaw_interval, powerlaw_peak, powerlaw_pl, ExpRegAssociation, PivotTable,
    PowerLawAssociation,
};
use plausets_core::numerics::child_seed;
use plausets_core::regions::{auto_bracket, evaluate_grid, invert_unimodal, region_area, GridBounds, GridRegion2D};
use plausets_core::{Error, Interval1D, Result};

use crate::source::{linspace, model_name, observe, parse_grid, truth, Observed};
use crate::{
    CommonArgs, CoverageArgs, CoverageMethod, CurveArgs, IntervalArgs, IntervalMethod, RegionArgs, SetChoice,
    ValidityArgs,
};

const CURVE_POINTS: usize = 201;

fn write_to(out: &Option<PathBuf>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn check_alpha(c: &CommonArgs) -> Result<()> {
    if !(c.alpha > 0.0 && c.alpha < 1.0) {
        return Err(Error::Domain(format!("--alpha must lie in (0, 1), got {}", c.alpha)));
    }
    Ok(())
}

fn two_dimensional(model: &str) -> Error {
    Error::Domain(format!("{model} has a two-dimensional parameter; use region2d"))
}

fn pivot_table(x: &[f64], c: &CommonArgs) -> Result<PivotTable> {
    PivotTable::build(x, c.mc_size, child_seed(c.seed, 1))
}

/// Width scale of an expreg curve: the central 95% range of the pivot.
fn pivot_spread(table: &PivotTable) -> f64 {
    (table.quantile(0.975) - table.quantile(0.025)).max(1e-8)
}

pub fn pl_curve(a: &CurveArgs) -> Result<()> {
    check_alpha(&a.common)?;
    let c = &a.common;
    with_workers(c.workers, || {
        let obs = observe(&a.model, c.seed)?;
        let mut meta =
            CurveMeta { model: model_name(a.model.model).to_string(), alpha: Some(c.alpha), ..CurveMeta::default() };
        if a.model.theta.is_some() {
            meta.seed = Some(c.seed);
        }
        let mut wald = None;
        let (curve, crossings) = match &obs {
            &Observed::PowerLaw { t, n } => {
                meta.t = Some(t);
                meta.n = Some(n);
                let pl = |th: f64| powerlaw_pl(t, th, n);
                curve_and_crossings(a, pl, powerlaw_peak(t, n)?, 0.0, true, meta)?
            }
            Observed::ExpReg { t, x, data } => {
                let t = *t;
                meta.t = Some(t);
                meta.n = Some(x.len());
                meta.seed = Some(c.seed);
                meta.mc_size = Some(c.mc_size);
                let table = pivot_table(x, c)?;
                let (peak, step) = (expreg_peak(t, &table), pivot_spread(&table));
                if let Some(d) = data {
                    wald = Some(expreg_wald_interval(d, c.alpha)?);
                }
                if a.per_theta {
                    let seed = child_seed(c.seed, 1);
                    let pl = |th: f64| expreg_pl_per_theta(t, th, x, c.mc_size, seed);
                    curve_and_crossings(a, pl, peak, step, false, meta)?
                } else {
                    let pl = |th: f64| Ok(expreg_pl(t, th, &table));
                    curve_and_crossings(a, pl, peak, step, false, meta)?
                }
            }
            Observed::Lognormal(_) => return Err(two_dimensional("lognormal")),
            Observed::LocScale { .. } => return Err(two_dimensional("locscale")),
        };
        write_to(&c.out, |w| curve.write_csv(w))?;
        let (argmax, max_pl) = curve.argmax();
        eprintln!("max pl {max_pl:.6} at theta {argmax}");
        eprintln!("alpha-crossings {}", crossings.csv_line());
        if let Some(w) = wald {
            eprintln!("wald interval   {}", w.csv_line());
        }
        Ok(())
    })?
}

fn curve_and_crossings<F>(
    a: &CurveArgs,
    pl: F,
    peak: f64,
    step: f64,
    positive: bool,
    meta: CurveMeta,
) -> Result<(PlausibilityCurve, Interval1D)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let alpha = a.common.alpha;
    let bracket = auto_bracket(&pl, peak, alpha, step, positive)?;
    let scale = peak.abs().max(bracket.1 - bracket.0);
    let crossings = invert_unimodal(&pl, alpha, bracket, 1e-13 * scale)?;
    let grid = match &a.grid {
        Some(spec) => {
            let (lo, hi, steps) = parse_grid(spec)?;
            linspace(lo, hi, steps)
        }
        None => linspace(bracket.0, bracket.1, CURVE_POINTS),
    };
    Ok((PlausibilityCurve::tabulate(&grid, &pl, meta)?, crossings))
}

pub fn interval(a: &IntervalArgs) -> Result<()> {
    check_alpha(&a.common)?;
    let c = &a.common;
    let iv = with_workers(c.workers, || -> Result<Interval1D> {
        match observe(&a.model, c.seed)? {
            Observed::PowerLaw { t, n } => match a.method {
                IntervalMethod::Plausibility => powerlaw_interval(t, n, c.alpha),
                IntervalMethod::FixedS => fixed_s_region(&PowerLawAssociation { n }, t, c.alpha),
                IntervalMethod::Wald => Err(Error::Domain("wald interval is only available for expreg".into())),
            },
            Observed::ExpReg { t, x, data } => match a.method {
                IntervalMethod::Plausibility => expreg_interval(t, c.alpha, &pivot_table(&x, c)?),
                IntervalMethod::FixedS => {
                    let table = pivot_table(&x, c)?;
                    fixed_s_region(&ExpRegAssociation { table: &table }, t, c.alpha)
                }
                IntervalMethod::Wald => match data {
                    Some(d) => expreg_wald_interval(&d, c.alpha),
                    None => Err(Error::Domain("wald interval needs data (--data or --theta), not --t".into())),
                },
            },
            Observed::Lognormal(_) => Err(two_dimensional("lognormal")),
            Observed::LocScale { .. } => Err(two_dimensional("locscale")),
        }
    })??;
    write_to(&c.out, |w| Ok(writeln!(w, "{}", iv.csv_line())?))
}

fn explicit_bounds(a: &RegionArgs) -> Result<Option<(GridBounds, (usize, usize))>> {
    match (&a.grid, &a.grid_y) {
        (Some(gx), Some(gy)) => {
            let (x0, x1, nx) = parse_grid(gx)?;
            let (y0, y1, ny) = parse_grid(gy)?;
            Ok(Some((GridBounds::new(x0, x1, y0, y1)?, (nx, ny))))
        }
        (None, None) => Ok(None),
        _ => Err(Error::Domain("--grid and --grid-y must be given together".into())),
    }
}

pub fn region2d(a: &RegionArgs) -> Result<()> {
    check_alpha(&a.common)?;
    let c = &a.common;
    let alpha = c.alpha;
    let region = with_workers(c.workers, || -> Result<GridRegion2D> {
        let explicit = explicit_bounds(a)?;
        let region = match observe(&a.model, c.seed)? {
            Observed::Lognormal(stats) => {
                let (bounds, res) = match explicit {
                    Some(b) => b,
                    None => (lognormal_auto_bounds(&stats, alpha)?, (a.resolution, a.resolution)),
                };
                if bounds.y_min <= 0.0 {
                    return Err(Error::Domain("sigma2 axis must be strictly positive".into()));
                }
                evaluate_grid(|mu, s2| lognormal_pl(&stats, mu, s2), alpha, bounds, res)?
                    .with_axis_names("mu", "sigma2")
            }
            Observed::LocScale { y, base } => {
                let (bounds, res) = explicit.ok_or_else(|| {
                    Error::Domain("locscale regions are unbounded in sigma; give --grid and --grid-y".into())
                })?;
                if bounds.y_min <= 0.0 {
                    return Err(Error::Domain("sigma axis must be strictly positive".into()));
                }
                evaluate_grid(|mu, s| locscale_pl(&y, mu, s, base), alpha, bounds, res)?.with_axis_names("mu", "sigma")
            }
            _ => return Err(Error::Domain("region2d needs a two-parameter model (lognormal, locscale)".into())),
        };
        if region.touches_edge() && !a.allow_clipped {
            let b = region.bounds;
            return Err(Error::BoundsClipped(format!("[{}, {}] x [{}, {}]", b.x_min, b.x_max, b.y_min, b.y_max)));
        }
        Ok(region)
    })??;
    write_to(&c.out, |w| region.write_csv(w))?;
    eprintln!(
        "{} of {} cells inside, area {:.6}, {} boundary cells",
        region.cell_count(),
        region.nx * region.ny,
        region_area(&region),
        region.boundary_cells().len()
    );
    Ok(())
}

pub fn coverage(a: &CoverageArgs) -> Result<()> {
    let c = &a.common;
    let method = match a.method {
        CoverageMethod::Plausibility => Method::Plausibility,
        CoverageMethod::Wald => Method::Wald,
        CoverageMethod::MleEllipse => Method::MleEllipse,
        CoverageMethod::NaiveRect => Method::NaiveRect,
        CoverageMethod::FixedS => Method::FixedS,
        CoverageMethod::Whole => Method::Whole,
    };
    let mut spec = CoverageSpec::new(truth(&a.model)?, method, c.alpha, a.reps, c.seed);
    spec.mc_size = c.mc_size;
    spec.workers = c.workers;
    let report = run_coverage(&spec)?;
    write_to(&c.out, |w| report.write_csv(w))?;
    if c.out.is_some() {
        println!("{report}");
    } else {
        eprintln!("{report}");
    }
    Ok(())
}

pub fn validity(a: &ValidityArgs) -> Result<()> {
    let c = &a.common;
    let model = truth(&a.model)?;
    let shipped = match &model {
        ModelSpec::PowerLaw { .. } => PredictiveRandomSet::Default1D,
        ModelSpec::Lognormal { .. } => PredictiveRandomSet::box2d(),
        ModelSpec::LocScale { n, .. } => PredictiveRandomSet::Box { dim: *n },
        ModelSpec::ExpReg { .. } => {
            return Err(Error::Domain("validity needs a continuous statistic; expreg is not supported".into()))
        }
    };
    let shrunken = Squared(shipped);
    let contour: Option<&dyn Contour> = match a.set {
        SetChoice::Shipped => None,
        SetChoice::Shrunken => Some(&shrunken),
    };
    let r = with_workers(c.workers, || uniformity_check(&model, a.draws, c.seed, contour))??;
    write_to(&c.out, |w| {
        writeln!(w, "ks_plus,ks_two_sided,band,draws,valid,exact")?;
        writeln!(
            w,
            "{:.6},{:.6},{:.6},{},{},{}",
            r.stats.ks_plus,
            r.stats.ks_two_sided,
            r.stats.band(),
            r.stats.n,
            r.pass,
            r.exact
        )?;
        Ok(())
    })
}
