//! Brute-force reference implementations shared by the oracle tests and the
//! acceptance suite. Each takes a route independent of the library: Sturm
//! counts instead of a dense eigensolver, a Taylor series instead of the
//! spectral exponential, explicit two-boson Fock-space evolution instead of
//! permanents.
#![allow(dead_code)]

use harper_core::Hamiltonian;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

// ---------------------------------------------------------------------------
// characteristic polynomial via Sturm counts

/// Number of eigenvalues below `x` for the zero-diagonal tridiagonal matrix,
/// from the sign changes of the leading-minor recurrence.
pub fn count_below(c: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for &ck in c {
        let prev = if d == 0.0 { f64::EPSILON } else { d };
        d = -x - ck * ck / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn sturm_eigenvalues(c: &[f64]) -> Vec<f64> {
    let n = c.len() + 1;
    let bound = 2.0 * c.iter().copied().fold(0.0, f64::max) + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(c, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// det(H - x I) by the three-term recurrence.
pub fn char_poly(c: &[f64], x: f64) -> f64 {
    let (mut p_prev, mut p) = (1.0, -x);
    for &ck in c {
        let next = -x * p - ck * ck * p_prev;
        p_prev = p;
        p = next;
    }
    p
}

// ---------------------------------------------------------------------------
// matrix exponential by Taylor series with scaling and squaring

pub fn taylor_exp(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let norm: f64 = m.iter().map(|x| x.norm()).sum::<f64>();
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let a = m / Complex64::new(2f64.powi(s), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..60 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        result += &term;
        if term.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-20 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

pub fn evolution_generator(h: &DMatrix<f64>, z: f64) -> DMatrix<Complex64> {
    h.map(|x| Complex64::new(0.0, -x * z))
}

// ---------------------------------------------------------------------------
// two bosons in Fock space

/// Basis `{q <= r}` of two-boson occupation states.
pub fn fock_basis(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|q| (q..n).map(move |r| (q, r))).collect()
}

pub fn occupations(n: usize, (q, r): (usize, usize)) -> Vec<u32> {
    let mut occ = vec![0; n];
    occ[q] += 1;
    occ[r] += 1;
    occ
}

/// Second-quantized `Σ h_pq a†_p a_q` on the two-boson sector.
pub fn two_boson_hamiltonian(h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let basis = fock_basis(n);
    let index = |occ: &[u32]| -> usize {
        let sites: Vec<usize> = occ
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
            .collect();
        basis
            .iter()
            .position(|&b| b == (sites[0], sites[1]))
            .unwrap()
    };
    let dim = basis.len();
    let mut h2 = DMatrix::zeros(dim, dim);
    for (col, &state) in basis.iter().enumerate() {
        let occ = occupations(n, state);
        for p in 0..n {
            for q in 0..n {
                if h[(p, q)] == 0.0 || occ[q] == 0 {
                    continue;
                }
                let mut out = occ.clone();
                let mut amp = (out[q] as f64).sqrt();
                out[q] -= 1;
                out[p] += 1;
                amp *= (out[p] as f64).sqrt();
                h2[(index(&out), col)] += h[(p, q)] * amp;
            }
        }
    }
    h2
}

pub fn fock_oracle(h: &Hamiltonian, z: f64, a: usize, b: usize) -> DMatrix<f64> {
    let n = h.dimension();
    let basis = fock_basis(n);
    let h2 = two_boson_hamiltonian(&h.to_matrix());
    let u2 = taylor_exp(&evolution_generator(&h2, z));
    let start = basis
        .iter()
        .position(|&s| s == (a.min(b), a.max(b)))
        .unwrap();
    let psi = u2.column(start);
    let mut gamma = DMatrix::zeros(n, n);
    for (k, &(q, r)) in basis.iter().enumerate() {
        gamma[(q, r)] = psi[k].norm_sqr();
        gamma[(r, q)] = psi[k].norm_sqr();
    }
    gamma
}

/// Two labelled particles: `H ⊗ 1 + 1 ⊗ H` on the full product space.
pub fn distinguishable_oracle(h: &Hamiltonian, z: f64, a: usize, b: usize) -> DMatrix<f64> {
    let n = h.dimension();
    let hm = h.to_matrix();
    let id = DMatrix::<f64>::identity(n, n);
    let h2 = hm.kronecker(&id) + id.kronecker(&hm);
    let u2 = taylor_exp(&evolution_generator(&h2, z));
    let mut psi0 = DVector::<Complex64>::zeros(n * n);
    psi0[a * n + b] = Complex64::new(1.0, 0.0);
    let psi = u2 * psi0;
    let mut gamma = DMatrix::zeros(n, n);
    for q in 0..n {
        for r in q..n {
            let p = if q == r {
                psi[q * n + q].norm_sqr()
            } else {
                psi[q * n + r].norm_sqr() + psi[r * n + q].norm_sqr()
            };
            gamma[(q, r)] = p;
            gamma[(r, q)] = p;
        }
    }
    gamma
}
