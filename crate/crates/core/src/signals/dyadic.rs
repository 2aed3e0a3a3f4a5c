//! The four dyadic series constructions, generated lazily cell by cell.
//!
//! Every series term is supported in a single unit cell `[z, z+1]` with `z` an
//! integer, so a window only ever touches finitely many terms.

use super::term::{Comb, Ramp, Term};
use super::Window;
use crate::math::{ceil, floor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DyadicKind {
    /// `1 + Σ 2ⁿ·χ_{Cₙ}` with `Aₙ = 2ⁿℤ + 2ⁿ⁻¹`: μ-almost periodic input whose
    /// displacement is not μ-almost periodic.
    MuNoMu,
    /// Continuous series of tent functions on `B_n = A_{2ⁿ}`, `A_n = 4ⁿℤ + 2ⁿ`;
    /// it has no mean value.
    MeanlessSeries,
    /// `Σ n²·χ_{[z, z+1/n)}` over `z ∈ 2·3ⁿℤ − 3ⁿ`; mean `3/8`, not S¹-bounded.
    UnboundedMeanSeries,
    /// `2 + Σ (n+1)²·χ_{(z+1−1/(n+1), z+1)}` over `z ∈ 2ⁿℤ + ((−2)ⁿ⁻¹ − 1)/3`.
    AlternatingOffsets,
}

impl DyadicKind {
    pub const ALL: [DyadicKind; 4] = [
        DyadicKind::MuNoMu,
        DyadicKind::MeanlessSeries,
        DyadicKind::UnboundedMeanSeries,
        DyadicKind::AlternatingOffsets,
    ];

    pub fn baseline(self) -> f64 {
        match self {
            DyadicKind::MuNoMu => 1.0,
            DyadicKind::AlternatingOffsets => 2.0,
            DyadicKind::MeanlessSeries | DyadicKind::UnboundedMeanSeries => 0.0,
        }
    }

    pub(crate) fn piecewise_constant(self) -> bool {
        !matches!(self, DyadicKind::MeanlessSeries)
    }

    /// Largest series index with a term in cell `[z, z+1]`, or 0.
    pub fn cell_index(self, z: i64) -> u32 {
        let mut top = 0;
        cell_terms(self, z, u32::MAX, &mut |n, _| top = top.max(n));
        top
    }
}

fn pow2(e: i32) -> f64 {
    libm::scalbn(1.0, e)
}

fn v3(mut z: i64) -> u32 {
    let mut m = 0;
    while z != 0 && z % 3 == 0 {
        z /= 3;
        m += 1;
    }
    m
}

/// Calls `emit(n, term)` for every term with index `n ≤ max` living in cell `z`.
pub(crate) fn cell_terms(kind: DyadicKind, z: i64, max: u32, emit: &mut dyn FnMut(u32, Term)) {
    let zf = z as f64;
    match kind {
        DyadicKind::MuNoMu => {
            if z == 0 {
                return;
            }
            let n = z.trailing_zeros() + 1;
            if n <= max {
                let ni = n as i32;
                emit(
                    n,
                    Term::Comb(Comb {
                        origin: zf,
                        spacing: pow2(1 - ni),
                        width: pow2(1 - 2 * ni),
                        value: pow2(ni),
                        count: 1u64 << (n - 1),
                    }),
                );
            }
        }
        DyadicKind::UnboundedMeanSeries => {
            if z % 2 == 0 {
                return;
            }
            for n in 1..=v3(z).min(max) {
                let nf = n as f64;
                emit(n, Term::Comb(Comb { origin: zf, spacing: 1.0, width: 1.0 / nf, value: nf * nf, count: 1 }));
            }
        }
        DyadicKind::MeanlessSeries => {
            let zi = z as i128;
            for n in 1..=5u32.min(max) {
                let e = 1u32 << n;
                let period = 1i128 << (2 * e);
                let offset = 1i128 << e;
                if zi.rem_euclid(period) != offset {
                    continue;
                }
                let nf = n as f64;
                let slope = (nf + 1.0) * (nf + 1.0) * pow2(e as i32);
                let half = 1.0 / (nf + 1.0);
                let c = zf + 0.5;
                emit(n, Term::Ramp(Ramp { x0: c - half, x1: c, v0: 0.0, slope }));
                emit(n, Term::Ramp(Ramp { x0: c, x1: c + half, v0: slope * half, slope: -slope }));
                return;
            }
        }
        DyadicKind::AlternatingOffsets => {
            let n = (3 * z as i128 + 1).trailing_zeros() + 1;
            if n <= max {
                let m = n as f64 + 1.0;
                let w = 1.0 / m;
                emit(n, Term::Comb(Comb { origin: zf + 1.0 - w, spacing: 1.0, width: w, value: m * m, count: 1 }));
            }
        }
    }
}

/// The least `n*` such that no series term with index above `n*` touches the
/// closed window. Cells sharing only an endpoint with the window are counted.
pub fn active_terms(kind: DyadicKind, w: Window) -> u32 {
    let lo = ceil(w.a - 1.0) as i64;
    let hi = floor(w.b) as i64;
    (lo..=hi).map(|z| kind.cell_index(z)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_partition_the_integers() {
        // s_n = ((−2)^{n−1} − 1)/3
        for z in -200i64..200 {
            let n = DyadicKind::AlternatingOffsets.cell_index(z);
            let s = ((-2i64).pow(n - 1) - 1) / 3;
            assert_eq!((z - s).rem_euclid(1 << n), 0, "z={z} n={n}");
        }
    }

    #[test]
    fn mu_no_mu_cells() {
        assert_eq!(DyadicKind::MuNoMu.cell_index(0), 0);
        assert_eq!(DyadicKind::MuNoMu.cell_index(1), 1);
        assert_eq!(DyadicKind::MuNoMu.cell_index(-2), 2);
        assert_eq!(DyadicKind::MuNoMu.cell_index(12), 3);
    }

    #[test]
    fn meanless_cells() {
        assert_eq!(DyadicKind::MeanlessSeries.cell_index(4), 1);
        assert_eq!(DyadicKind::MeanlessSeries.cell_index(20), 1);
        assert_eq!(DyadicKind::MeanlessSeries.cell_index(16), 2);
        assert_eq!(DyadicKind::MeanlessSeries.cell_index(256), 3);
        assert_eq!(DyadicKind::MeanlessSeries.cell_index(65536), 4);
        assert_eq!(DyadicKind::MeanlessSeries.cell_index(8), 0);
    }

    #[test]
    fn unbounded_cells() {
        assert_eq!(DyadicKind::UnboundedMeanSeries.cell_index(3), 1);
        assert_eq!(DyadicKind::UnboundedMeanSeries.cell_index(-9), 2);
        assert_eq!(DyadicKind::UnboundedMeanSeries.cell_index(6), 0);
    }
}
