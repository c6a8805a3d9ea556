//! Independent reference implementations used as test oracles.
//!
//! Everything here recomputes results from first principles (direct
//! trigonometric sums, full enumeration, hand-rolled Jacobi rotations)
//! and deliberately shares no code with the library paths it checks.

#![allow(dead_code)]

use num_complex::Complex64;

/// Normalized character-sum modulus, direct trig evaluation.
/// Phases are reduced mod q before the trig calls so large s·x products
/// do not lose precision.
pub fn oracle_bias(set: &[u64], x: u64, q: u64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &s in set {
        let angle = std::f64::consts::TAU * ((s as u128 * x as u128 % q as u128) as f64)
            / q as f64;
        re += angle.cos();
        im += angle.sin();
    }
    (re * re + im * im).sqrt() / set.len() as f64
}

/// Max bias over nonzero x by full scan, smallest x on ties.
pub fn oracle_max_bias(set: &[u64], q: u64) -> (u64, f64) {
    let mut best = (1u64, -1.0);
    for x in 1..q {
        let b = oracle_bias(set, x, q);
        if b > best.1 {
            best = (x, b);
        }
    }
    best
}

/// Collision fidelity of a parameter matrix at input difference `delta`.
pub fn oracle_fidelity(rows: &[Vec<u64>], delta: u64, q: u64) -> f64 {
    let mut fid = 1.0;
    for row in rows {
        let b = oracle_bias(row, delta, q);
        fid *= b * b;
    }
    fid
}

/// Worst-case collision by full scan over x, smallest x on ties.
pub fn oracle_worst_case(rows: &[Vec<u64>], q: u64) -> (u64, f64) {
    let mut best = (1u64, -1.0);
    for x in 1..q {
        let f = oracle_fidelity(rows, x, q);
        if f > best.1 {
            best = (x, f);
        }
    }
    best
}

/// All canonical rows [0, c_1, ..., c_{d-1}] with distinct nonzero entries,
/// in lexicographic order.
pub fn canonical_rows(q: u64, d: usize) -> Vec<Vec<u64>> {
    let mut rows = Vec::new();
    let mut combo: Vec<u64> = Vec::new();
    fn extend(q: u64, d: usize, start: u64, combo: &mut Vec<u64>, rows: &mut Vec<Vec<u64>>) {
        if combo.len() == d - 1 {
            let mut row = Vec::with_capacity(d);
            row.push(0);
            row.extend_from_slice(combo);
            rows.push(row);
            return;
        }
        for v in start..q {
            combo.push(v);
            extend(q, d, v + 1, combo, rows);
            combo.pop();
        }
    }
    extend(q, d, 1, &mut combo, &mut rows);
    rows
}

/// Globally optimal canonical set of size d in Z_q by full enumeration:
/// (epsilon, elements), first optimum in lexicographic order.
pub fn oracle_best_set(q: u64, d: usize) -> (f64, Vec<u64>) {
    let mut best: Option<(f64, Vec<u64>)> = None;
    for row in canonical_rows(q, d) {
        let (_, eps) = oracle_max_bias(&row, q);
        if best.as_ref().is_none_or(|(b, _)| eps < *b) {
            best = Some((eps, row));
        }
    }
    best.expect("nonempty enumeration")
}

/// Globally optimal parameter matrix by full enumeration over all ordered
/// canonical row tuples and all x: (worst-case fidelity, matrix), first
/// optimum in lexicographic order.
pub fn oracle_optimal_params(q: u64, d: usize, m: usize) -> (f64, Vec<Vec<u64>>) {
    let pool = canonical_rows(q, d);
    let n = pool.len();
    let mut idx = vec![0usize; m];
    let mut best: Option<(f64, Vec<Vec<u64>>)> = None;
    loop {
        let rows: Vec<Vec<u64>> = idx.iter().map(|&i| pool[i].clone()).collect();
        let (_, fid) = oracle_worst_case(&rows, q);
        if best.as_ref().is_none_or(|(b, _)| fid < *b) {
            best = Some((fid, rows));
        }
        let mut pos = m;
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            if idx[pos] + 1 < n {
                idx[pos] += 1;
                for slot in idx.iter_mut().skip(pos + 1) {
                    *slot = 0;
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    best.expect("nonempty enumeration")
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// ascending. Independent of the library's eigensolver.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(mut a: Vec<Vec<Complex64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in p + 1..n {
                off = off.max(a[p][r].norm());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a[p][r];
                if apr.norm() < 1e-300 {
                    continue;
                }
                let phi = apr.arg();
                let theta = 0.5 * (2.0 * apr.norm()).atan2(a[p][p].re - a[r][r].re);
                let c = theta.cos();
                let s = theta.sin();
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = Complex64::from_polar(1.0, -phi);
                // A ← U† A U with U = [[c, −s·e^{iφ}], [s·e^{-iφ}, c]].
                for k in 0..n {
                    let akp = a[k][p];
                    let akr = a[k][r];
                    a[k][p] = akp * c + akr * s * e_neg;
                    a[k][r] = -akp * s * e_pos + akr * c;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let ark = a[r][k];
                    a[p][k] = apk * c + ark * s * e_pos;
                    a[r][k] = -apk * s * e_neg + ark * c;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    values
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn jacobi_recovers_known_spectra() {
        // Diagonal matrix.
        let d = vec![
            vec![Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.8, 0.0)],
        ];
        let vals = jacobi_eigenvalues(d);
        assert!((vals[0] - 0.2).abs() < 1e-12 && (vals[1] - 0.8).abs() < 1e-12);

        // Pure-state projector (1,i)/√2 has eigenvalues {0, 1}.
        let half = Complex64::new(0.5, 0.0);
        let mihalf = Complex64::new(0.0, -0.5);
        let ihalf = Complex64::new(0.0, 0.5);
        let proj = vec![vec![half, mihalf], vec![ihalf, half]];
        let vals = jacobi_eigenvalues(proj);
        assert!(vals[0].abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
    }
}
