//! Dense statevector storage and the three primitive unitaries of the
//! deletion operator: the Walsh–Hadamard transform `W`, the marked-complement
//! phase `I_c` and the zero-state phase `I_0`.
//!
//! Basis indexing is little-endian: index `i` reads qubit `j` from bit `j`
//! of `i`. None of the operations here distinguish qubit order, so the
//! convention only matters when states are exchanged with other tools.
//!
//! Every operation mutates in place and returns `&mut Self`, so calls can be
//! chained without copying the register.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;

use crate::error::{Error, Result};

/// Default upper bound on the qubit count (2^26 amplitudes = 1 GiB).
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Block length (in amplitudes) for the cache-resident low stages of the
/// transform. Kept at an even power of two so that every in-block stage is
/// radix-4.
const WHT_BLOCK_LOG2: u32 = 16;

/// Target strip footprint (in amplitudes) for the high-stride stages.
const TILE_AMPS: usize = 1 << 20;

/// Narrowest column strip, 512 bytes.
const MIN_STRIP: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition over all `2^n` basis states, subject to the
    /// default qubit cap.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::uniform_with_cap(n, DEFAULT_QUBIT_CAP)
    }

    pub fn uniform_with_cap(n: usize, cap: usize) -> Result<Self> {
        check_qubits(n, cap)?;
        let len = 1usize << n;
        let amp = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Ok(Self {
            n,
            amps: vec![amp; len],
        })
    }

    /// The computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n, DEFAULT_QUBIT_CAP)?;
        let len = 1usize << n;
        if index >= len {
            return Err(Error::IndexOutOfRange {
                tau: index,
                size: len,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps an existing amplitude array. The length must be a power of two
    /// (at least 2) and every entry finite; normalization is not enforced.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "amplitude {i} is not finite"
            )));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// A random normalized state; components drawn uniformly from [-1, 1].
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n, DEFAULT_QUBIT_CAP)?;
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect();
        let mut state = Self { n, amps };
        state.normalize();
        Ok(state)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of amplitudes, `N = 2^n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> &mut Self {
        let norm = self.norm();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
        self
    }

    /// Replaces the state by `H^{⊗n}` applied to it.
    ///
    /// The transform runs in place as a sequence of butterfly stages. Stages
    /// are fused in pairs (radix-4, scaled by 1/2); when `n` is odd a single
    /// radix-2 stage scaled by 1/√2 remains. Stages with stride below the
    /// block length run block by block so they stay cache resident.
    pub fn apply_walsh_hadamard(&mut self) -> &mut Self {
        walsh_hadamard_in_place(&mut self.amps);
        self
    }

    /// One deletion step `-W·I_0(φ)·W·I_c(φ)` in three sweeps over memory.
    ///
    /// The transform's stages act on distinct qubits and commute, so `W` is
    /// split into its cache-blocked low stages and strip-tiled high stages.
    /// The step runs as: `I_c` then low stages, block by block; high stages,
    /// `I_0` and high stages again, strip by strip; low stages then the sign,
    /// block by block. Agrees with the primitive-by-primitive composition to
    /// rounding (the stage order of the second transform differs).
    pub fn apply_fused_deletion_step(&mut self, tau: usize, phi: f64) -> Result<&mut Self> {
        let size = self.len();
        if tau >= size {
            return Err(Error::IndexOutOfRange { tau, size });
        }
        let phase = Complex64::cis(phi);
        let x = &mut self.amps;
        let block = 1usize << WHT_BLOCK_LOG2;
        if size <= block {
            phase_all_but(x, 0, phase, tau);
            stages(x, 1);
            x[0] *= phase;
            stages(x, 1);
            x.iter_mut().for_each(|a| *a = -*a);
            return Ok(self);
        }
        for (i, chunk) in x.chunks_exact_mut(block).enumerate() {
            phase_all_but(chunk, i * block, phase, tau);
            stages(chunk, 1);
        }
        for_each_strip(x, block, |rows, strip| {
            high_stages(rows, strip.clone());
            if strip.start == 0 {
                rows[0][0] *= phase;
            }
            high_stages(rows, strip);
        });
        for chunk in x.chunks_exact_mut(block) {
            stages(chunk, 1);
            chunk.iter_mut().for_each(|a| *a = -*a);
        }
        Ok(self)
    }

    /// `I_c`: multiplies every amplitude except the one at `tau` by `e^{iφ}`.
    pub fn apply_marked_complement_phase(&mut self, tau: usize, phi: f64) -> Result<&mut Self> {
        let size = self.len();
        if tau >= size {
            return Err(Error::IndexOutOfRange { tau, size });
        }
        let phase = Complex64::cis(phi);
        let marked = self.amps[tau];
        self.amps.iter_mut().for_each(|a| *a *= phase);
        self.amps[tau] = marked;
        Ok(self)
    }

    /// `I_0`: multiplies the amplitude of `|0⟩` by `e^{iφ}`.
    pub fn apply_zero_phase(&mut self, phi: f64) -> &mut Self {
        self.amps[0] *= Complex64::cis(phi);
        self
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn apply_global_phase(&mut self, theta: f64) -> &mut Self {
        let phase = Complex64::cis(theta);
        self.amps.iter_mut().for_each(|a| *a *= phase);
        self
    }

    /// Global phase of exactly π.
    pub fn negate(&mut self) -> &mut Self {
        self.amps.iter_mut().for_each(|a| *a = -*a);
        self
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::Dimension {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest per-amplitude modulus of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Dimension {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `|⟨a|b⟩|`, clamped to [0, 1].
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

fn check_qubits(n: usize, cap: usize) -> Result<()> {
    // usize shifts beyond the pointer width are meaningless anyway.
    let cap = cap.min(usize::BITS as usize - 2);
    if n == 0 || n > cap {
        return Err(Error::Capacity { n, cap });
    }
    Ok(())
}

/// Multiplies `chunk` (which starts at global index `offset`) by `phase`,
/// leaving global index `skip` untouched.
fn phase_all_but(chunk: &mut [Complex64], offset: usize, phase: Complex64, skip: usize) {
    let local = skip.wrapping_sub(offset);
    let kept = chunk.get(local).copied();
    chunk.iter_mut().for_each(|a| *a *= phase);
    if let Some(kept) = kept {
        chunk[local] = kept;
    }
}

pub(crate) fn walsh_hadamard_in_place(x: &mut [Complex64]) {
    let len = x.len();
    debug_assert!(len.is_power_of_two());
    let block = 1usize << WHT_BLOCK_LOG2;
    if len <= block {
        stages(x, 1);
        return;
    }
    for chunk in x.chunks_exact_mut(block) {
        stages(chunk, 1);
    }
    for_each_strip(x, block, high_stages);
}

/// Views `x` as `len/block` rows of `block` columns and hands `f` one narrow
/// column strip at a time. Stages with stride `>= block` only combine whole
/// rows, so they can run strip by strip while the strip is cache resident.
fn for_each_strip<F>(x: &mut [Complex64], block: usize, mut f: F)
where
    F: FnMut(&mut [&mut [Complex64]], Range<usize>),
{
    let mut rows: Vec<&mut [Complex64]> = x.chunks_exact_mut(block).collect();
    let width = (TILE_AMPS / rows.len()).clamp(MIN_STRIP, block);
    for col in (0..block).step_by(width) {
        f(&mut rows, col..col + width);
    }
}

/// Every row-combining stage over one strip, in the same stage sequence
/// as [`stages`] would use on the whole array.
fn high_stages(rows: &mut [&mut [Complex64]], strip: Range<usize>) {
    let count = rows.len();
    let mut h = 1;
    while h * 4 <= count {
        for base in (0..count).step_by(4 * h) {
            for r in base..base + h {
                let [a, b, c, d] = rows
                    .get_disjoint_mut([r, r + h, r + 2 * h, r + 3 * h])
                    .expect("distinct rows");
                radix4_lanes(
                    &mut a[strip.clone()],
                    &mut b[strip.clone()],
                    &mut c[strip.clone()],
                    &mut d[strip.clone()],
                );
            }
        }
        h *= 4;
    }
    if h * 2 <= count {
        for r in 0..h {
            let [a, b] = rows.get_disjoint_mut([r, r + h]).expect("distinct rows");
            radix2_lanes(&mut a[strip.clone()], &mut b[strip.clone()]);
        }
    }
}

/// Runs every stage with stride `>= h` over `x`.
fn stages(x: &mut [Complex64], mut h: usize) {
    let len = x.len();
    while h * 4 <= len {
        radix4_stage(x, h);
        h *= 4;
    }
    if h * 2 <= len {
        radix2_stage(x, h);
    }
}

fn radix2_stage(x: &mut [Complex64], h: usize) {
    for group in x.chunks_exact_mut(2 * h) {
        let (lo, hi) = group.split_at_mut(h);
        radix2_lanes(lo, hi);
    }
}

fn radix4_stage(x: &mut [Complex64], h: usize) {
    for group in x.chunks_exact_mut(4 * h) {
        let (q01, q23) = group.split_at_mut(2 * h);
        let (q0, q1) = q01.split_at_mut(h);
        let (q2, q3) = q23.split_at_mut(h);
        radix4_lanes(q0, q1, q2, q3);
    }
}

#[inline(always)]
fn radix2_lanes(lo: &mut [Complex64], hi: &mut [Complex64]) {
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        let (u, v) = (*a, *b);
        *a = (u + v) * FRAC_1_SQRT_2;
        *b = (u - v) * FRAC_1_SQRT_2;
    }
}

/// Two fused radix-2 stages over four equal-length lanes.
#[inline(always)]
fn radix4_lanes(
    q0: &mut [Complex64],
    q1: &mut [Complex64],
    q2: &mut [Complex64],
    q3: &mut [Complex64],
) {
    for (((a, b), c), d) in q0
        .iter_mut()
        .zip(q1.iter_mut())
        .zip(q2.iter_mut())
        .zip(q3.iter_mut())
    {
        let s0 = *a + *b;
        let d0 = *a - *b;
        let s1 = *c + *d;
        let d1 = *c - *d;
        *a = (s0 + s1) * 0.5;
        *b = (d0 + d1) * 0.5;
        *c = (s0 - s1) * 0.5;
        *d = (d0 - d1) * 0.5;
    }
}
