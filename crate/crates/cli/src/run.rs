//! Experiment orchestration: build the model and initial state from a
//! config, evolve, and shape the results into tables.

use std::fs;
use std::path::{Path, PathBuf};

use phnet::biortho::{
    cluster_modes_numeric, dimer_modes_analytic, dirac_gram, lift_mode_state, metric_factor,
    mode_block_hamiltonians, project_biortho, BiorthoModes,
};
use phnet::dynamics::{evolve, norm_series, uniform_grid, EvolutionResult, EvolveMethod};
use phnet::numeric::{eig_hermitian, StateVector};
use phnet::wavepacket::{
    dispersion, gaussian_kspace, predict_norm_exact, to_site_state, Band, KSpaceCoeffs,
};
use phnet::{C64, Network64};

use crate::config::{ExperimentConfig, MethodParam, StateSection};
use crate::error::Result;
use crate::svg::{render_svg, PlotSpec};
use crate::table::ResultTable;

/// Command-line overrides applied on top of the config's evolution section.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub method: Option<MethodParam>,
    pub dt: Option<f64>,
}

/// Everything a run produces before hitting the filesystem.
pub struct RunOutput {
    pub result: EvolutionResult<f64>,
    pub norms: ResultTable,
    pub profiles: Option<ResultTable>,
    /// Mode-angle summary for ladder models: (theta, delta, period).
    pub ladder_summary: Option<(f64, f64, f64)>,
}

/// Execute a validated config end to end.
pub fn run_experiment(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput> {
    let net = config.model.build()?;
    let ladder = config.model.ladder();

    let (psi0, prediction) = initial_state(config, &net)?;

    let t_max = match config.evolution.t_max {
        Some(t) => t,
        None => {
            let l = ladder.as_ref().expect("validated: t_max required for networks");
            2.0 * l.period()?
        }
    };
    let grid = uniform_grid(t_max, config.evolution.samples.max(1));
    let method_param = opts.method.or(config.evolution.method).unwrap_or(MethodParam::Spectral);
    let dt = opts.dt.or(config.evolution.dt);
    let method: EvolveMethod<f64> = method_param.to_method(dt);

    let result = evolve(&net, &psi0, &grid, method)?;

    // Norm table: per-leg sums for ladder-shaped networks, totals always.
    let mut norms = ResultTable::new(vec!["t", "P1s", "P2s", "PT", "PT_predicted"]);
    let legs = if net.cluster_dim() == 2 { Some(norm_series(&result)?) } else { None };
    for (i, &t) in result.times.iter().enumerate() {
        let (p1, p2) = match &legs {
            Some(series) => (series.leg1[i], series.leg2[i]),
            None => (f64::NAN, f64::NAN),
        };
        let predicted = prediction.at(t);
        norms.push_row(vec![t, p1, p2, result.dirac_norm[i], predicted]);
    }

    let profiles = (net.cluster_dim() == 2).then(|| {
        let mut table = ResultTable::new(vec!["t", "j", "P1", "P2"]);
        for (i, &t) in result.times.iter().enumerate() {
            let prof = &result.profiles[i];
            for alpha in 0..net.n_clusters {
                table.push_row(vec![t, (alpha + 1) as f64, prof[0][alpha], prof[1][alpha]]);
            }
        }
        table
    });

    let ladder_summary = match &ladder {
        Some(l) => Some((l.theta()?, l.delta()?, l.period()?)),
        None => None,
    };
    Ok(RunOutput { result, norms, profiles, ladder_summary })
}

/// Closed-form norm prediction attached to a run.
enum NormPrediction {
    /// Exact two-band law from the initial band coefficients.
    TwoBand { coeffs: KSpaceCoeffs<f64>, theta: f64, delta: f64 },
    /// Time-independent single-band weight (general networks).
    Constant(f64),
    /// No mode framework available.
    None,
}

impl NormPrediction {
    fn at(&self, t: f64) -> f64 {
        match self {
            NormPrediction::TwoBand { coeffs, theta, delta } => {
                predict_norm_exact(coeffs, *theta, *delta, t)
            }
            NormPrediction::Constant(v) => *v,
            NormPrediction::None => f64::NAN,
        }
    }
}

/// Build the initial state and its norm prediction. States are rescaled so
/// their biorthogonal coefficient weight is 1, which is the normalization
/// the closed-form norm laws assume.
fn initial_state(
    config: &ExperimentConfig,
    net: &Network64,
) -> Result<(StateVector<f64>, NormPrediction)> {
    let ladder = config.model.ladder();
    let analytic_modes = match &ladder {
        Some(l) => Some(dimer_modes_analytic(l.j, l.gamma)?),
        None => None,
    };

    let psi0 = match &config.state {
        StateSection::Gaussian(g) => {
            let l = ladder.as_ref().expect("validated: gaussian needs a ladder");
            let coeffs = gaussian_kspace(&g.to_spec(), l)?;
            to_site_state(&coeffs, analytic_modes.as_ref().unwrap())?
        }
        StateSection::SingleMode(s) => {
            let modes = match &analytic_modes {
                Some(m) => m.clone(),
                None => cluster_modes_numeric(&net.cluster, f64::tol_rel())?,
            };
            let c = match &s.coefficients {
                Some(pairs) => normalize_coeffs(pairs),
                None => {
                    let amp = C64::new(1.0 / (net.n_clusters as f64).sqrt(), 0.0);
                    vec![amp; net.n_clusters]
                }
            };
            lift_mode_state(net, &modes, s.mode, &c)?
        }
        StateSection::Amplitudes(pairs) => {
            let amps: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
            StateVector::new(net.cluster_dim(), amps)?
        }
    };

    // Rescale to unit coefficient weight and derive the prediction.
    let modes: Option<BiorthoModes<f64>> = match &analytic_modes {
        Some(m) => Some(m.clone()),
        None => cluster_modes_numeric(&net.cluster, f64::tol_rel()).ok(),
    };
    let Some(modes) = modes else {
        eprintln!("note: cluster spectrum is not real; norm prediction unavailable");
        return Ok((psi0.normalized(), NormPrediction::None));
    };
    let coeffs = project_biortho(net, &modes, &psi0)?;
    let weight: f64 = coeffs.entries().iter().map(|z| z.norm_sqr()).sum();
    let scale = C64::new(1.0 / weight.sqrt(), 0.0);
    let psi0 = StateVector::new(
        net.cluster_dim(),
        psi0.amplitudes().iter().map(|&z| z * scale).collect(),
    )?;

    let prediction = match &ladder {
        Some(l) => {
            let coeffs = project_biortho(net, &modes, &psi0)?;
            let kspace = KSpaceCoeffs::from_mode_coeffs(&coeffs)?;
            NormPrediction::TwoBand { coeffs: kspace, theta: l.theta()?, delta: l.delta()? }
        }
        None => {
            let coeffs = project_biortho(net, &modes, &psi0)?;
            let mut total = 0.0;
            for sigma in 0..net.cluster_dim() {
                let w: f64 = (0..net.n_clusters).map(|a| coeffs[(a, sigma)].norm_sqr()).sum();
                total += metric_factor(&modes, sigma) * w;
            }
            NormPrediction::Constant(total)
        }
    };
    Ok((psi0, prediction))
}

fn normalize_coeffs(pairs: &[[f64; 2]]) -> Vec<C64> {
    let raw: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
    let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|z| z / C64::new(norm, 0.0)).collect()
}

trait TolExt {
    fn tol_rel() -> f64;
}

impl TolExt for f64 {
    fn tol_rel() -> f64 {
        1e-10
    }
}

/// Dispersion and mode-block spectrum table.
///
/// For ladder models the columns are `n, k, eps_lower, eps_upper` (the
/// closed-form dispersion at `k = 2 pi n / N`) and `eig_lower, eig_upper`
/// (the rank-`n` sorted eigenvalues of the two mode blocks). For general
/// networks the columns are `sigma, rank, eigenvalue`.
pub fn spectrum_table(config: &ExperimentConfig) -> Result<ResultTable> {
    let net = config.model.build()?;
    let (modes, ladder) = match config.model.ladder() {
        Some(l) => (dimer_modes_analytic(l.j, l.gamma)?, Some(l)),
        None => (cluster_modes_numeric(&net.cluster, f64::tol_rel())?, None),
    };
    let blocks = mode_block_hamiltonians(&net, &modes)?;
    match ladder {
        Some(l) => {
            let delta = l.delta()?;
            let (lower, _) = eig_hermitian(&blocks.blocks[0])?;
            let (upper, _) = eig_hermitian(&blocks.blocks[1])?;
            let mut table = ResultTable::new(vec![
                "n",
                "k",
                "eps_lower",
                "eps_upper",
                "eig_lower",
                "eig_upper",
            ]);
            for n in 1..=l.n {
                let k = 2.0 * std::f64::consts::PI * n as f64 / l.n as f64;
                table.push_row(vec![
                    n as f64,
                    k,
                    dispersion(k, l.kappa, delta, Band::Lower),
                    dispersion(k, l.kappa, delta, Band::Upper),
                    lower[n - 1],
                    upper[n - 1],
                ]);
            }
            Ok(table)
        }
        None => {
            let mut table = ResultTable::new(vec!["sigma", "rank", "eigenvalue"]);
            for (sigma, block) in blocks.blocks.iter().enumerate() {
                let (vals, _) = eig_hermitian(block)?;
                for (rank, v) in vals.iter().enumerate() {
                    table.push_row(vec![sigma as f64, rank as f64, *v]);
                }
            }
            Ok(table)
        }
    }
}

/// Mode Gram (quasi-canonical commutator) matrices as a flat table with
/// columns `row, col, df_re, df_im, dg_re, dg_im`.
pub fn gram_table(config: &ExperimentConfig) -> Result<ResultTable> {
    let net = config.model.build()?;
    let modes = match config.model.ladder() {
        Some(l) => dimer_modes_analytic(l.j, l.gamma)?,
        None => cluster_modes_numeric(&net.cluster, f64::tol_rel())?,
    };
    let gram = dirac_gram(&modes);
    let mut table = ResultTable::new(vec!["row", "col", "df_re", "df_im", "dg_re", "dg_im"]);
    for r in 0..modes.dim() {
        for c in 0..modes.dim() {
            table.push_row(vec![
                r as f64,
                c as f64,
                gram.d_f[(r, c)].re,
                gram.d_f[(r, c)].im,
                gram.d_g[(r, c)].re,
                gram.d_g[(r, c)].im,
            ]);
        }
    }
    Ok(table)
}

/// Write the run's tables (and optional plot) under `out_dir`; returns the
/// paths written.
pub fn write_outputs(
    config: &ExperimentConfig,
    out_dir: &Path,
    output: &RunOutput,
    title: &str,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let norms_path = out_dir.join(&config.output.norms_csv);
    output.norms.write_csv(&norms_path)?;
    written.push(norms_path);

    if let Some(profiles) = &output.profiles {
        let profiles_path = out_dir.join(&config.output.profiles_csv);
        profiles.write_csv(&profiles_path)?;
        written.push(profiles_path);
    }

    if let Some(svg_name) = &config.output.svg {
        let reference = output.ladder_summary.map(|(theta, _, _)| 1.0 / theta.cos());
        let spec = PlotSpec { title: title.to_string(), reference };
        let svg = render_svg(&output.norms, output.profiles.as_ref(), &spec)?;
        let svg_path = out_dir.join(svg_name);
        fs::write(&svg_path, svg)?;
        written.push(svg_path);
    }
    Ok(written)
}
