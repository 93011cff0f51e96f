//! Mixed-radix composite Hilbert spaces: registers, state vectors,
//! measurement, and reduced density matrices.
//!
//! # Indexing convention
//!
//! A [`Register`] is an ordered list of subsystem dimensions. The leftmost
//! subsystem is the most significant in basis indexing, matching the usual
//! left-to-right ket order: for dims `[2, 2, 8]`, the basis state
//! `|x₂⟩|x₁⟩|y⟩` has composite index `(x₂·2 + x₁)·8 + y`. The map between
//! local-index tuples and composite indices `0..D` is bijective.
//!
//! # Determinism
//!
//! Measurement sampling uses ChaCha8 seeded from a single caller-supplied
//! 64-bit seed (`ChaCha8Rng::seed_from_u64`), so runs are bit-identical for
//! a fixed seed on every platform.

use alloc::{format, vec, vec::Vec};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::tol;

/// An ordered list of subsystem dimensions defining a mixed-radix composite
/// Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    dims: Vec<usize>,
}

impl Register {
    /// Create a register from subsystem dimensions; every dimension must be
    /// at least 2.
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::Dimension("register needs at least one subsystem".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Dimension(format!("subsystem dimension {d} is below 2")));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .ok_or_else(|| Error::Capacity("composite dimension overflows usize".into()))?;
        }
        Ok(Self { dims })
    }

    /// The register used by the `n`-channel multiplexer: `n` qubits followed
    /// by one `2^n`-dimensional qudit. Qubit at position `p` carries channel
    /// `n − 1 − p`, so the leftmost qubit is the highest channel.
    pub fn channels_with_qudit(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("at least one channel is required".into()));
        }
        if n > 12 {
            return Err(Error::Capacity(format!("{n} channels exceed the supported 12")));
        }
        let mut dims = vec![2usize; n];
        dims.push(1usize << n);
        Self::new(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of subsystems.
    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Composite dimension `D`, the product of all subsystem dimensions.
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Dimension of one subsystem.
    pub fn dim_of(&self, subsystem: usize) -> Result<usize> {
        self.dims
            .get(subsystem)
            .copied()
            .ok_or_else(|| Error::Dimension(format!("no subsystem {subsystem} in {:?}", self.dims)))
    }

    /// Stride of a subsystem in the composite index: the product of all
    /// dimensions to its right.
    pub fn stride(&self, subsystem: usize) -> Result<usize> {
        if subsystem >= self.dims.len() {
            return Err(Error::Dimension(format!(
                "no subsystem {subsystem} in {:?}",
                self.dims
            )));
        }
        Ok(self.dims[subsystem + 1..].iter().product())
    }

    /// Mixed-radix composite index of a local-index tuple.
    pub fn composite_index(&self, locals: &[usize]) -> Result<usize> {
        if locals.len() != self.dims.len() {
            return Err(Error::Dimension(format!(
                "{} local indices given for {} subsystems",
                locals.len(),
                self.dims.len()
            )));
        }
        let mut index = 0usize;
        for (&x, &d) in locals.iter().zip(&self.dims) {
            if x >= d {
                return Err(Error::Dimension(format!("local index {x} out of range for dimension {d}")));
            }
            index = index * d + x;
        }
        Ok(index)
    }

    /// Local-index tuple of a composite index.
    pub fn local_indices(&self, index: usize) -> Vec<usize> {
        let mut locals = vec![0usize; self.dims.len()];
        let mut rest = index;
        for (k, &d) in self.dims.iter().enumerate().rev() {
            locals[k] = rest % d;
            rest /= d;
        }
        locals
    }

    /// Local index of one subsystem within a composite index.
    pub fn local_at(&self, index: usize, subsystem: usize) -> usize {
        let stride: usize = self.dims[subsystem + 1..].iter().product();
        (index / stride) % self.dims[subsystem]
    }
}

/// A normalized complex amplitude array over a register's composite basis.
///
/// Global phase is never canonicalized away; compare states with
/// [`StateVector::fidelity`], [`StateVector::max_deviation`], or
/// [`StateVector::max_deviation_phase_aligned`].
#[derive(Debug, Clone)]
pub struct StateVector {
    register: Register,
    amps: Vec<C64>,
}

impl StateVector {
    /// Basis state with amplitude 1 at the given local indices.
    pub fn basis_state(register: Register, locals: &[usize]) -> Result<Self> {
        let index = register.composite_index(locals)?;
        let mut amps = vec![C64::ZERO; register.dim()];
        amps[index] = C64::ONE;
        Ok(Self { register, amps })
    }

    /// Tensor (Kronecker) product of per-subsystem amplitude lists, in
    /// register order. Each factor must be normalized within `1e-10` and
    /// match its subsystem's dimension.
    pub fn product_state(register: Register, factors: &[Vec<C64>]) -> Result<Self> {
        if factors.len() != register.num_subsystems() {
            return Err(Error::Dimension(format!(
                "{} factors given for {} subsystems",
                factors.len(),
                register.num_subsystems()
            )));
        }
        for (k, factor) in factors.iter().enumerate() {
            let d = register.dims()[k];
            if factor.len() != d {
                return Err(Error::Dimension(format!(
                    "factor {k} has length {} but subsystem dimension is {d}",
                    factor.len()
                )));
            }
            let norm_sqr: f64 = factor.iter().map(|a| a.norm_sqr()).sum();
            let deviation = (norm_sqr - 1.0).abs();
            if deviation > tol::INVARIANT {
                return Err(Error::Normalization { deviation });
            }
        }
        let mut amps = vec![C64::ONE];
        for factor in factors {
            let mut next = Vec::with_capacity(amps.len() * factor.len());
            for &a in &amps {
                for &f in factor {
                    next.push(a * f);
                }
            }
            amps = next;
        }
        Ok(Self { register, amps })
    }

    /// Wrap a raw amplitude array, checking length and normalization.
    pub fn from_amplitudes(register: Register, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != register.dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes given for composite dimension {}",
                amps.len(),
                register.dim()
            )));
        }
        let deviation = (amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs();
        if deviation > tol::INVARIANT {
            return Err(Error::Normalization { deviation });
        }
        Ok(Self { register, amps })
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_register(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest entrywise amplitude deviation; sensitive to global phase.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        self.check_same_register(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise deviation after multiplying `other` by the phase
    /// that aligns it with `self` on this state's largest amplitude.
    pub fn max_deviation_phase_aligned(&self, other: &Self) -> Result<f64> {
        self.check_same_register(other)?;
        let pivot = (0..self.amps.len())
            .max_by(|&i, &j| {
                self.amps[i]
                    .norm_sqr()
                    .partial_cmp(&self.amps[j].norm_sqr())
                    .expect("amplitude moduli are finite")
            })
            .expect("states are non-empty");
        let b = other.amps[pivot];
        if b == C64::ZERO {
            return self.max_deviation(other);
        }
        let phase = (self.amps[pivot] / b) / (self.amps[pivot] / b).norm();
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max))
    }

    /// Local indices of `subsystem` carrying amplitude with modulus above
    /// `cutoff`, in increasing order.
    pub fn support(&self, subsystem: usize, cutoff: f64) -> Result<Vec<usize>> {
        let d = self.register.dim_of(subsystem)?;
        let stride = self.register.stride(subsystem)?;
        let mut present = vec![false; d];
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > cutoff {
                present[(i / stride) % d] = true;
            }
        }
        Ok((0..d).filter(|&x| present[x]).collect())
    }

    /// Marginal outcome probabilities of one subsystem.
    pub fn subsystem_probabilities(&self, subsystem: usize) -> Result<Vec<f64>> {
        let d = self.register.dim_of(subsystem)?;
        let stride = self.register.stride(subsystem)?;
        let mut probs = vec![0.0; d];
        for (i, a) in self.amps.iter().enumerate() {
            probs[(i / stride) % d] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projectively measure one subsystem in the computational basis.
    ///
    /// The outcome is sampled from the marginal probabilities using ChaCha8
    /// seeded from `seed`; the post-measurement state is the renormalized
    /// projection. Bit-identical for a fixed seed.
    pub fn measure_subsystem(&self, subsystem: usize, seed: u64) -> Result<(usize, StateVector)> {
        let probs = self.subsystem_probabilities(subsystem)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: f64 = rng.random();
        let mut outcome = None;
        let mut cumulative = 0.0;
        for (x, &p) in probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            cumulative += p;
            outcome = Some(x);
            if u < cumulative {
                break;
            }
        }
        let outcome = outcome
            .ok_or_else(|| Error::Internal("measurement found no positive-probability outcome".into()))?;
        let p = probs[outcome];
        if p <= 0.0 {
            return Err(Error::Internal("renormalizing a zero-probability projection".into()));
        }
        let d = self.register.dim_of(subsystem)?;
        let stride = self.register.stride(subsystem)?;
        let scale = 1.0 / p.sqrt();
        let amps: Vec<C64> = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if (i / stride) % d == outcome {
                    a * scale
                } else {
                    C64::ZERO
                }
            })
            .collect();
        Ok((outcome, StateVector { register: self.register.clone(), amps }))
    }

    /// Partial trace over every subsystem not listed in `keep`.
    ///
    /// `keep` may be given in any order; the reduced matrix is indexed by the
    /// kept subsystems in register order.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Argument("keep set must not be empty".into()));
        }
        let n = self.register.num_subsystems();
        let mut kept_mask = vec![false; n];
        for &k in keep {
            if k >= n {
                return Err(Error::Dimension(format!("no subsystem {k} in a {n}-subsystem register")));
            }
            kept_mask[k] = true;
        }
        let kept: Vec<usize> = (0..n).filter(|&k| kept_mask[k]).collect();
        let traced: Vec<usize> = (0..n).filter(|&k| !kept_mask[k]).collect();
        let kept_dims: Vec<usize> = kept.iter().map(|&k| self.register.dims()[k]).collect();
        let dim_kept: usize = kept_dims.iter().product();
        let dim_traced: usize = traced.iter().map(|&k| self.register.dims()[k]).product();

        // Composite offsets contributed by each kept pattern and each traced
        // pattern; a composite index is the sum of one of each.
        let offsets = |subsystems: &[usize], size: usize| -> Vec<usize> {
            let mut table = vec![0usize; size];
            for (pattern, slot) in table.iter_mut().enumerate() {
                let mut rest = pattern;
                let mut offset = 0usize;
                for &k in subsystems.iter().rev() {
                    let d = self.register.dims()[k];
                    let local = rest % d;
                    rest /= d;
                    offset += local * self.register.stride(k).expect("validated subsystem");
                }
                *slot = offset;
            }
            table
        };
        let kept_offsets = offsets(&kept, dim_kept);
        let traced_offsets = offsets(&traced, dim_traced);

        let mut matrix = SquareMatrix::zeros(dim_kept);
        for &e in &traced_offsets {
            for (a, &ka) in kept_offsets.iter().enumerate() {
                let va = self.amps[ka + e];
                if va == C64::ZERO {
                    continue;
                }
                for (b, &kb) in kept_offsets.iter().enumerate() {
                    let v = matrix.get(a, b) + va * self.amps[kb + e].conj();
                    matrix.set(a, b, v);
                }
            }
        }
        Ok(DensityMatrix { dims: kept_dims, matrix })
    }

    fn check_same_register(&self, other: &Self) -> Result<()> {
        if self.register != other.register {
            return Err(Error::Dimension(format!(
                "register mismatch: {:?} vs {:?}",
                self.register.dims(),
                other.register.dims()
            )));
        }
        Ok(())
    }

    pub(crate) fn from_raw(register: Register, amps: Vec<C64>) -> Self {
        Self { register, amps }
    }
}

/// Reduced state of a subsystem subset.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: SquareMatrix,
}

impl DensityMatrix {
    /// Dimensions of the retained subsystems, in register order.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.matrix.get(i, i)).sum()
    }

    /// `tr(ρ²)`; 1 for pure states, `1/dim` for maximally mixed ones.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_{ij} ρ_ij ρ_ji; for Hermitian ρ this is Σ |ρ_ij|².
        let d = self.dim();
        let mut sum = C64::ZERO;
        for i in 0..d {
            for j in 0..d {
                sum += self.matrix.get(i, j) * self.matrix.get(j, i);
            }
        }
        sum.re
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                if (self.matrix.get(i, j) - self.matrix.get(j, i).conj()).norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }
}
