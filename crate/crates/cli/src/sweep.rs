//! Magnetic-field sweeps: levels, entanglement entropies, and thermal
//! negativity, one CSV row per grid point.

use std::path::PathBuf;

use anyhow::{Context, Result};
use rayon::prelude::*;

use nvrotor::params::to_ghz;
use nvrotor::spectra::DEFAULT_DEGENERACY_REL_TOL;
use nvrotor::states::{entanglement_report, negativity, thermal_state, EntanglementReport};
use nvrotor::{BasisSet, FieldHamiltonian, Frame, Spectrum};

use crate::config::SweepConfig;
use crate::csv::{cell, CsvWriter};

/// Everything computed at one field value.
pub struct SweepRow {
    pub field: f64,
    /// lowest eigenvalues in GHz
    pub levels_ghz: Vec<f64>,
    pub report: EntanglementReport<f64>,
    /// thermal negativity per configured temperature
    pub thermal_negativity: Vec<f64>,
}

pub fn basis_for(cfg: &SweepConfig) -> std::sync::Arc<BasisSet> {
    match cfg.frame {
        Frame::Body => BasisSet::body(cfg.cutoff),
        Frame::Space => BasisSet::space(cfg.cutoff),
    }
}

fn row_at(
    ham: &FieldHamiltonian<f64>,
    cfg: &SweepConfig,
    field: f64,
) -> Result<SweepRow> {
    let spec: Spectrum<f64> = ham.eigendecompose_at(field)?;
    let n = cfg.n_levels.min(spec.len());
    let levels_ghz = spec.eigenvalues()[..n].iter().map(|&w| to_ghz(w)).collect();
    let report = entanglement_report(&spec, DEFAULT_DEGENERACY_REL_TOL)?;
    let thermal_negativity = cfg
        .temperatures
        .iter()
        .map(|&t| Ok(negativity(&thermal_state(&spec, t, &cfg.params)?)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SweepRow {
        field,
        levels_ghz,
        report,
        thermal_negativity,
    })
}

/// Solve every grid point (concurrently, assembled in grid order).
pub fn compute_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let basis = basis_for(cfg);
    anyhow::ensure!(
        cfg.n_levels <= basis.dim(),
        "n_levels = {} exceeds the basis dimension {}",
        cfg.n_levels,
        basis.dim()
    );
    let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
    cfg.field_grid
        .par_iter()
        .map(|&b| row_at(&ham, cfg, b).with_context(|| format!("at B = {} T", b)))
        .collect()
}

/// Run the sweep and write `sweep.csv` into the output directory.
///
/// Ground-only sweeps (no temperatures) write one row per field value with
/// the pure ground-state negativity; thermal sweeps write one row per
/// (field, temperature) pair with the Gibbs-state negativity.
pub fn run_sweep(cfg: &SweepConfig) -> Result<PathBuf> {
    let rows = compute_sweep(cfg)?;
    let path = cfg.out_dir.join("sweep.csv");
    let n_levels = rows.first().map_or(0, |r| r.levels_ghz.len());

    let mut header: Vec<String> = vec!["B_T".into()];
    let thermal = !cfg.temperatures.is_empty();
    if thermal {
        header.push("T_mK".into());
    }
    for k in 0..n_levels {
        header.push(format!("level_{:02}_GHz", k));
    }
    header.push("entropy_ground_bits".into());
    header.push("entropy_first_excited_bits".into());
    header.push("negativity".into());
    header.push("ground_degenerate".into());
    header.push("excited_degenerate".into());
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut writer = CsvWriter::create(&path, &header_refs)?;

    for row in &rows {
        let mut common = Vec::with_capacity(header.len());
        common.push(cell(row.field));
        let fixed = |neg: f64, common: &mut Vec<String>| {
            for &l in &row.levels_ghz {
                common.push(cell(l));
            }
            common.push(cell(row.report.entropy_ground));
            common.push(cell(row.report.entropy_first_excited));
            common.push(cell(neg));
            common.push(u8::from(row.report.ground_degenerate).to_string());
            common.push(u8::from(row.report.excited_degenerate).to_string());
        };
        if thermal {
            for (i, &t) in cfg.temperatures.iter().enumerate() {
                let mut fields = vec![cell(row.field), cell(t * 1e3)];
                fixed(row.thermal_negativity[i], &mut fields);
                writer.row(&fields)?;
            }
        } else {
            fixed(row.report.negativity, &mut common);
            writer.row(&common)?;
        }
    }
    writer.finish()?;
    Ok(path)
}
