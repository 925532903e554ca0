//! Truncated Hilbert-space bases for the spin-rotor problem in both frames,
//! with index maps and the conserved-quantum-number block structure.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::{CVector, Real};

/// Which complete set of commuting observables labels the kets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// |J mJ kJ, K kK⟩: total angular momentum with body-fixed projections.
    Body,
    /// |L mL kL; mS⟩: rotation angular momentum and space-fixed spin.
    Space,
}

/// One basis ket.
///
/// Body frame: `ang = J`, `m = mJ`, `k = kJ`, `spin = kK`.
/// Space frame: `ang = L`, `m = mL`, `k = kL`, `spin = mS`.
/// The spin quantum number is fixed at K = S = 1, so `spin ∈ {-1, 0, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ket {
    pub ang: u32,
    pub m: i32,
    pub k: i32,
    pub spin: i32,
}

/// A contiguous set of basis indices sharing one conserved label.
#[derive(Debug, Clone)]
pub struct Block {
    /// mJ in the body frame, mL + mS in the space frame.
    pub label: i32,
    /// Indices into the basis ordering, ascending.
    pub indices: Vec<usize>,
}

/// Ordered truncated basis with index maps and block partition.
///
/// Ordering is lexicographic in (ang, m, k, spin), all ascending. The spin
/// label is the fastest index, so index `i` factorizes as
/// `i = 3 * rotor_index + spin_index` with `spin_index = spin + 1`; the
/// partial traces and the partial transpose rely on this product layout.
#[derive(Debug)]
pub struct BasisSet {
    frame: Frame,
    cutoff: u32,
    kets: Vec<Ket>,
    index: HashMap<Ket, usize>,
    blocks: Vec<Block>,
}

impl BasisSet {
    /// Body-frame basis with all J ≤ `jmax`; dimension 3·Σ_J (2J+1)².
    pub fn body(jmax: u32) -> Arc<Self> {
        Arc::new(Self::build(Frame::Body, jmax))
    }

    /// Space-frame basis with all L ≤ `lmax`; dimension 3·Σ_L (2L+1)².
    pub fn space(lmax: u32) -> Arc<Self> {
        Arc::new(Self::build(Frame::Space, lmax))
    }

    fn build(frame: Frame, cutoff: u32) -> Self {
        let mut kets = Vec::new();
        for ang in 0..=cutoff {
            let a = ang as i32;
            for m in -a..=a {
                for k in -a..=a {
                    for spin in -1..=1 {
                        kets.push(Ket { ang, m, k, spin });
                    }
                }
            }
        }
        let index: HashMap<Ket, usize> = kets.iter().enumerate().map(|(i, &s)| (s, i)).collect();

        let label_of = |ket: &Ket| match frame {
            Frame::Body => ket.m,
            Frame::Space => ket.m + ket.spin,
        };
        let mut by_label: HashMap<i32, Vec<usize>> = HashMap::new();
        for (i, ket) in kets.iter().enumerate() {
            by_label.entry(label_of(ket)).or_default().push(i);
        }
        let mut blocks: Vec<Block> = by_label
            .into_iter()
            .map(|(label, indices)| Block { label, indices })
            .collect();
        blocks.sort_by_key(|b| b.label);

        Self {
            frame,
            cutoff,
            kets,
            index,
            blocks,
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// The truncation Jmax (body) or Lmax (space).
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Total dimension, 3·Σ (2J+1)².
    pub fn dim(&self) -> usize {
        self.kets.len()
    }

    /// Number of rotor triples (ang, m, k): dim / 3.
    pub fn rotor_dim(&self) -> usize {
        self.kets.len() / 3
    }

    pub fn ket(&self, i: usize) -> Ket {
        self.kets[i]
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn index_of(&self, ket: &Ket) -> Option<usize> {
        self.index.get(ket).copied()
    }

    /// Partition of all indices by the conserved label, ascending in label.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Conserved label of one ket: mJ (body) or mL + mS (space).
    pub fn block_label(&self, ket: &Ket) -> i32 {
        match self.frame {
            Frame::Body => ket.m,
            Frame::Space => ket.m + ket.spin,
        }
    }

    pub fn spin_index(&self, i: usize) -> usize {
        i % 3
    }

    pub fn rotor_index(&self, i: usize) -> usize {
        i / 3
    }

    pub(crate) fn check_frame(&self, expected: Frame) -> Result<()> {
        if self.frame != expected {
            return Err(Error::FrameMismatch {
                expected,
                got: self.frame,
            });
        }
        Ok(())
    }
}

/// Copy amplitudes of `v` (over `from`) into the larger basis `into` by
/// matching quantum numbers; all other amplitudes are zero. The norm is
/// preserved exactly since the shared kets map one-to-one.
pub fn embed<T: Real>(v: &CVector<T>, from: &BasisSet, into: &BasisSet) -> Result<CVector<T>> {
    if from.frame() != into.frame() {
        return Err(Error::FrameMismatch {
            expected: from.frame(),
            got: into.frame(),
        });
    }
    if v.len() != from.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            got: v.len(),
        });
    }
    let mut out = CVector::<T>::zeros(into.dim());
    for (i, ket) in from.kets().iter().enumerate() {
        let j = into.index_of(ket).ok_or(Error::NotSubBasis)?;
        out[j] = v[i];
    }
    Ok(out)
}

/// Restrict `v` (over `from`) to the smaller basis `onto`, dropping
/// amplitudes on kets outside it. Inverse of [`embed`] on embedded vectors.
pub fn restrict<T: Real>(v: &CVector<T>, from: &BasisSet, onto: &BasisSet) -> Result<CVector<T>> {
    if from.frame() != onto.frame() {
        return Err(Error::FrameMismatch {
            expected: from.frame(),
            got: onto.frame(),
        });
    }
    if v.len() != from.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            got: v.len(),
        });
    }
    let mut out = CVector::<T>::zeros(onto.dim());
    for (j, ket) in onto.kets().iter().enumerate() {
        if let Some(i) = from.index_of(ket) {
            out[j] = v[i];
        }
    }
    Ok(out)
}
