//! Canned datasets behind the named figures. Grids follow the plotted axis
//! ranges; every default is overridable through the sweep configuration.

use std::path::PathBuf;

use anyhow::Result;
use rayon::prelude::*;

use nvrotor::hamiltonian::assemble_spin_reference;
use nvrotor::params::to_ghz;
use nvrotor::spectra::{eigendecompose, DEFAULT_DEGENERACY_REL_TOL};
use nvrotor::states::{entanglement_report, negativity, thermal_state};
use nvrotor::{BasisSet, FieldHamiltonian, Frame};

use crate::config::{FigureTag, GridSpec, SweepConfig};
use crate::csv::{cell, CsvWriter};
use crate::sweep::basis_for;

/// Write the dataset backing one figure; returns the file path.
pub fn reproduce_figure(tag: FigureTag, cfg: &SweepConfig) -> Result<PathBuf> {
    let path = cfg.out_dir.join(tag.file_name());
    match tag {
        FigureTag::Fig3a => spin_reference_levels(&path, cfg)?,
        FigureTag::Fig3b => full_levels(&path, cfg)?,
        FigureTag::Fig3c => ground_distribution(&path, cfg)?,
        FigureTag::Fig4a => entropy_curve(&path, cfg, Frame::Body)?,
        FigureTag::Fig4b => negativity_vs_field(&path, cfg)?,
        FigureTag::Fig4c => negativity_vs_temperature(&path, cfg)?,
        FigureTag::Fig5 => entropy_curve(&path, cfg, Frame::Space)?,
    }
    Ok(path)
}

fn field_grid_03() -> Vec<f64> {
    GridSpec {
        start: 0.0,
        stop: 0.3,
        points: 61,
    }
    .values()
}

fn field_grid_1() -> Vec<f64> {
    GridSpec {
        start: 0.0,
        stop: 1.0,
        points: 41,
    }
    .values()
}

/// Zeeman and fine structure of the resting NV center (three levels).
fn spin_reference_levels(path: &std::path::Path, cfg: &SweepConfig) -> Result<()> {
    let mut w = CsvWriter::create(
        path,
        &["B_T", "level_00_GHz", "level_01_GHz", "level_02_GHz"],
    )?;
    for b in field_grid_03() {
        let spec = eigendecompose(&assemble_spin_reference(&cfg.params, b))?;
        w.row(&[
            cell(b),
            cell(to_ghz(spec.eigenvalue(0))),
            cell(to_ghz(spec.eigenvalue(1))),
            cell(to_ghz(spec.eigenvalue(2))),
        ])?;
    }
    w.finish()
}

/// Low levels of the full spin-rotation Hamiltonian.
fn full_levels(path: &std::path::Path, cfg: &SweepConfig) -> Result<()> {
    let basis = BasisSet::body(cfg.cutoff);
    let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
    let grid = field_grid_03();
    let n = cfg.n_levels.min(basis.dim());
    let table = nvrotor::spectra::sweep_levels(&ham, &grid, n)?;
    let mut header = vec!["B_T".to_string()];
    for k in 0..n {
        header.push(format!("level_{:02}_GHz", k));
    }
    let refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut w = CsvWriter::create(path, &refs)?;
    for (b, levels) in table.field_grid.iter().zip(table.levels.iter()) {
        let mut row = vec![cell(*b)];
        row.extend(levels.iter().map(|&x| cell(to_ghz(x))));
        w.row(&row)?;
    }
    w.finish()
}

/// Probability distribution of the ground state over the basis kets at one
/// field value (cfg.field_tesla), largest first.
fn ground_distribution(path: &std::path::Path, cfg: &SweepConfig) -> Result<()> {
    let basis = BasisSet::body(cfg.cutoff);
    let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
    let spec = ham.eigendecompose_at(cfg.field_tesla)?;
    let ground = spec.state(0);
    let mut probs: Vec<(f64, usize)> = ground
        .iter()
        .enumerate()
        .map(|(i, z)| (z.norm_sqr(), i))
        .collect();
    probs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let mut w = CsvWriter::create(
        path,
        &["rank", "J", "mJ", "kJ", "kK", "probability"],
    )?;
    for (rank, (p, i)) in probs.iter().take(32).enumerate() {
        let ket = basis.ket(*i);
        w.row(&[
            rank.to_string(),
            ket.ang.to_string(),
            ket.m.to_string(),
            ket.k.to_string(),
            ket.spin.to_string(),
            cell(*p),
        ])?;
    }
    w.finish()
}

/// Ground and first-excited entanglement entropy against the field.
fn entropy_curve(path: &std::path::Path, cfg: &SweepConfig, frame: Frame) -> Result<()> {
    let mut sub = cfg.clone();
    sub.frame = frame;
    let basis = basis_for(&sub);
    let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
    let grid = field_grid_1();
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&b| -> Result<_> {
            let spec = ham.eigendecompose_at(b)?;
            Ok(entanglement_report(&spec, DEFAULT_DEGENERACY_REL_TOL)?)
        })
        .collect::<Result<_>>()?;
    let mut w = CsvWriter::create(
        path,
        &[
            "B_T",
            "entropy_ground_bits",
            "entropy_first_excited_bits",
            "ground_degenerate",
            "excited_degenerate",
        ],
    )?;
    for (b, r) in grid.iter().zip(rows.iter()) {
        w.row(&[
            cell(*b),
            cell(r.entropy_ground),
            cell(r.entropy_first_excited),
            u8::from(r.ground_degenerate).to_string(),
            u8::from(r.excited_degenerate).to_string(),
        ])?;
    }
    w.finish()
}

const FIG4B_TEMPS_MK: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const FIG4C_FIELDS: [f64; 3] = [0.1, 0.5, 1.0];

/// Thermal negativity against the field at fixed temperatures.
fn negativity_vs_field(path: &std::path::Path, cfg: &SweepConfig) -> Result<()> {
    let basis = BasisSet::body(cfg.cutoff);
    let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
    let grid = field_grid_1();
    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&b| -> Result<Vec<f64>> {
            let spec = ham.eigendecompose_at(b)?;
            FIG4B_TEMPS_MK
                .iter()
                .map(|&mk| Ok(negativity(&thermal_state(&spec, mk * 1e-3, &cfg.params)?)?))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut w = CsvWriter::create(path, &["B_T", "T_mK", "negativity"])?;
    for (b, by_temp) in grid.iter().zip(rows.iter()) {
        for (&mk, &n) in FIG4B_TEMPS_MK.iter().zip(by_temp.iter()) {
            w.row(&[cell(*b), cell(mk), cell(n)])?;
        }
    }
    w.finish()
}

/// Thermal negativity against the temperature at fixed fields.
fn negativity_vs_temperature(path: &std::path::Path, cfg: &SweepConfig) -> Result<()> {
    let basis = BasisSet::body(cfg.cutoff);
    let ham = FieldHamiltonian::<f64>::new(&basis, &cfg.params)?;
    // 25 logarithmically spaced points over 0.1 mK to 10 mK
    let temps_mk: Vec<f64> = (0..25)
        .map(|i| 0.1 * 10f64.powf(2.0 * i as f64 / 24.0))
        .collect();
    let rows: Vec<Vec<f64>> = FIG4C_FIELDS
        .par_iter()
        .map(|&b| -> Result<Vec<f64>> {
            let spec = ham.eigendecompose_at(b)?;
            temps_mk
                .iter()
                .map(|&mk| Ok(negativity(&thermal_state(&spec, mk * 1e-3, &cfg.params)?)?))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut w = CsvWriter::create(path, &["B_T", "T_mK", "negativity"])?;
    for (&b, by_temp) in FIG4C_FIELDS.iter().zip(rows.iter()) {
        for (&mk, &n) in temps_mk.iter().zip(by_temp.iter()) {
            w.row(&[cell(b), cell(mk), cell(n)])?;
        }
    }
    w.finish()
}
