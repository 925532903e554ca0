//! Cutoff-convergence study: ground/first-excited fidelities between the
//! base cutoff and each larger one, plus the thermal-negativity-vs-cutoff
//! table at fixed temperature.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use rayon::prelude::*;

use nvrotor::basis::embed;
use nvrotor::states::{fidelity_pure, negativity, thermal_state};
use nvrotor::{BasisSet, FieldHamiltonian, Spectrum};

use crate::config::ConvergeConfig;
use crate::csv::{cell, CsvWriter};

/// Cutoffs of the negativity table (the convergence figure's set).
const NEGATIVITY_CUTOFFS: [u32; 5] = [2, 3, 4, 5, 6];

fn solve_grid(
    basis: &Arc<BasisSet>,
    cfg: &ConvergeConfig,
) -> Result<Vec<Spectrum<f64>>> {
    let ham = FieldHamiltonian::<f64>::new(basis, &cfg.params)?;
    cfg.field_grid
        .par_iter()
        .map(|&b| Ok(ham.eigendecompose_at(b)?))
        .collect()
}

/// Write `fidelity.csv` and `negativity_cutoff.csv` into the output
/// directory; returns both paths.
pub fn run_convergence(cfg: &ConvergeConfig) -> Result<(PathBuf, PathBuf)> {
    let base_basis = BasisSet::body(cfg.base);
    let base_spectra = solve_grid(&base_basis, cfg).context("solving the base cutoff")?;

    let fid_path = cfg.out_dir.join("fidelity.csv");
    let mut fid = CsvWriter::create(
        &fid_path,
        &["B_T", "cutoff", "fidelity_ground", "fidelity_first_excited"],
    )?;
    for &cutoff in &cfg.compare {
        let big_basis = BasisSet::body(cutoff);
        let big_spectra =
            solve_grid(&big_basis, cfg).with_context(|| format!("solving cutoff {}", cutoff))?;
        for ((&b, small), big) in cfg
            .field_grid
            .iter()
            .zip(base_spectra.iter())
            .zip(big_spectra.iter())
        {
            let f0 = fidelity_pure(
                &embed(&small.state(0), &base_basis, &big_basis)?,
                &big.state(0),
            )?;
            let f1 = fidelity_pure(
                &embed(&small.state(1), &base_basis, &big_basis)?,
                &big.state(1),
            )?;
            fid.row(&[
                cell(b),
                cutoff.to_string(),
                cell(f0),
                cell(f1),
            ])?;
        }
    }
    fid.finish()?;

    let neg_path = cfg.out_dir.join("negativity_cutoff.csv");
    let mut neg = CsvWriter::create(&neg_path, &["B_T", "cutoff", "negativity"])?;
    for &cutoff in &NEGATIVITY_CUTOFFS {
        let basis = BasisSet::body(cutoff);
        let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
        let values: Vec<f64> = cfg
            .field_grid
            .par_iter()
            .map(|&b| -> Result<f64> {
                let spec = ham.eigendecompose_at(b)?;
                Ok(negativity(&thermal_state(&spec, cfg.temperature, &cfg.params)?)?)
            })
            .collect::<Result<_>>()?;
        for (&b, &n) in cfg.field_grid.iter().zip(values.iter()) {
            neg.row(&[cell(b), cutoff.to_string(), cell(n)])?;
        }
    }
    neg.finish()?;

    Ok((fid_path, neg_path))
}
