//! Dense linear algebra.
//!
//! Two families of routines: ordinary Gaussian elimination over a [`Field`]
//! (partial pivoting when the field exposes magnitudes), and fraction-free
//! Bareiss elimination over an integral domain with exact division.

use num_traits::{One, Zero};

use crate::mpoly::Frac;
use crate::scalar::{ExactDiv, Field, Ring};

pub type Matrix<T> = Vec<Vec<T>>;

fn pick_pivot<F: Field>(m: &Matrix<F>, col: usize, from: usize, tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in m.iter().enumerate().skip(from) {
        let x = &row[col];
        if x.is_zero() {
            continue;
        }
        match x.pivot_magnitude() {
            None => return Some(i),
            Some(a) if a > tol && best.is_none_or(|(_, b)| a > b) => best = Some((i, a)),
            Some(_) => {}
        }
    }
    best.map(|(i, _)| i)
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = pick_pivot(&a, c, c, 0.0) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d = d * piv.clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / piv.clone();
            for j in c..n {
                let v = a[i][j].clone() - f.clone() * a[c][j].clone();
                a[i][j] = v;
            }
        }
    }
    d
}

/// Rank; entries whose magnitude is at most `tol` count as zero (exact
/// fields ignore `tol`).
pub fn rank_with_tol<F: Field>(m: &Matrix<F>, tol: f64) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r, tol) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / piv.clone();
            for j in c..cols {
                let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                a[i][j] = v;
            }
        }
        r += 1;
    }
    r
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rank_with_tol(m, 0.0)
}

pub fn mat_mul<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(R::zero(), |acc, l| acc + a[i][l].clone() * b[l][j].clone()))
                .collect()
        })
        .collect()
}

pub fn identity<R: Ring>(n: usize) -> Matrix<R> {
    (0..n).map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect()).collect()
}

/// Row echelon form from fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon<R> {
    pub rows: Matrix<R>,
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

/// Bareiss elimination to row echelon form. Every division is exact in an
/// integral domain; a failed division means the ring is not one.
pub fn bareiss<R: ExactDiv>(m: &Matrix<R>) -> Echelon<R> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = R::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            let lead = a[i][c].clone();
            for j in c + 1..cols {
                let v = piv.clone() * a[i][j].clone() - lead.clone() * a[r][j].clone();
                a[i][j] = v.exact_div(&prev).expect("Bareiss step is exact in a domain");
            }
            a[i][c] = R::zero();
        }
        // columns before c in rows below are already zero
        pivots.push((r, c));
        prev = piv;
        r += 1;
    }
    Echelon { rows: a, pivots }
}

/// Determinant by Bareiss elimination.
pub fn det_bareiss<R: ExactDiv>(m: &Matrix<R>) -> R {
    let n = m.len();
    let mut a = m.clone();
    let mut prev = R::one();
    let mut sign = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return R::zero();
        };
        if p != c {
            a.swap(p, c);
            sign = !sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = a[c][c].clone() * a[i][j].clone() - a[i][c].clone() * a[c][j].clone();
                a[i][j] = v.exact_div(&prev).expect("Bareiss step is exact in a domain");
            }
            a[i][c] = R::zero();
        }
        prev = a[c][c].clone();
    }
    if sign {
        -prev
    } else {
        prev
    }
}

/// Solution set of `A x = b` over the fraction field of a polynomial ring.
#[derive(Clone, Debug)]
pub struct LinearSolution<R: Ring> {
    pub consistent: bool,
    /// A particular solution (free unknowns set to zero). When the system
    /// is inconsistent, the solution of its pivot rows.
    pub particular: Vec<Frac<R>>,
    /// Basis of the homogeneous solutions.
    pub nullspace: Vec<Vec<Frac<R>>>,
    pub rank: usize,
}

/// Solves `A x = b` with entries in a polynomial ring, working fraction-free
/// and back-substituting in the fraction field.
pub fn solve_fraction_free<R: Ring + ExactDiv>(
    a: &Matrix<crate::mpoly::Poly<R>>,
    b: &[crate::mpoly::Poly<R>],
) -> LinearSolution<R> {
    type P<R> = crate::mpoly::Poly<R>;
    let n = a.first().map_or(0, |r| r.len());
    let aug: Matrix<P<R>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let ech = bareiss(&aug);
    let consistent = ech.pivots.iter().all(|&(_, c)| c < n);
    let pivots: Vec<(usize, usize)> = ech.pivots.iter().copied().filter(|&(_, c)| c < n).collect();
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();

    // back substitution with a chosen right-hand side and free values
    let back = |rhs: &dyn Fn(usize) -> P<R>, fixed: &dyn Fn(usize) -> Frac<R>| -> Vec<Frac<R>> {
        let mut x: Vec<Frac<R>> = (0..n).map(|c| fixed(c)).collect();
        for &(r, c) in pivots.iter().rev() {
            let mut acc = Frac::from_poly(rhs(r));
            for j in c + 1..n {
                let e = &ech.rows[r][j];
                if !e.is_zero() && !x[j].is_zero() {
                    acc = acc.sub(&x[j].scale_poly(e));
                }
            }
            let d = Frac::from_poly(ech.rows[r][c].clone());
            x[c] = acc.div(&d).expect("pivot is nonzero").simplify();
        }
        x
    };
    let zero = || Frac::from_poly(P::<R>::zero());
    // for an inconsistent system this is the solution of the pivot rows
    // alone, which callers use to report a residual
    let particular = back(&|r| ech.rows[r][n].clone(), &|_| zero());
    let nullspace = free
        .iter()
        .map(|&f| back(&|_| P::<R>::zero(), &|c| if c == f { Frac::from_poly(P::<R>::one()) } else { zero() }))
        .collect();
    LinearSolution { consistent, particular, nullspace, rank: pivots.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::{parse::parse_poly, MPoly};

    fn rm(v: &[&[i64]]) -> Matrix<Rational> {
        v.iter().map(|r| r.iter().map(|x| rat(*x)).collect()).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&rm(&[&[1, 2], &[3, 4]])), rat(-2));
        assert_eq!(det(&rm(&[&[0, 1], &[1, 0]])), rat(-1));
        assert_eq!(det(&rm(&[&[1, 2], &[2, 4]])), rat(0));
    }

    #[test]
    fn det_float_and_exact_agree() {
        let m = rm(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let f: Matrix<f64> = m.iter().map(|r| r.iter().map(crate::scalar::rat_to_f64).collect()).collect();
        let f32m: Matrix<f32> = f.iter().map(|r| r.iter().map(|x| *x as f32).collect()).collect();
        assert_eq!(det(&m), rat(4));
        assert!((det(&f) - 4.0).abs() < 1e-12);
        assert!((det(&f32m) - 4.0).abs() < 1e-5);
        assert_eq!(det_bareiss(&m), rat(4));
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank(&rm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(rank(&rm(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn bareiss_det_polynomial() {
        let p = |s: &str| parse_poly(s).unwrap();
        let m = vec![vec![p("r"), p("1")], vec![p("1"), p("r")]];
        assert_eq!(det_bareiss(&m), p("r^2 - 1"));
    }

    #[test]
    fn fraction_free_solve() {
        let p = |s: &str| parse_poly(s).unwrap();
        // r x = r^2 - 1, x + y = 0  ->  x = (r^2 - 1)/r, y = -x
        let a = vec![vec![p("r"), p("0")], vec![p("1"), p("1")]];
        let b = vec![p("r^2 - 1"), p("0")];
        let s = solve_fraction_free(&a, &b);
        assert!(s.consistent);
        assert!(s.nullspace.is_empty());
        let want = Frac::new(p("r^2 - 1"), p("r")).unwrap();
        assert!(s.particular[0].equals(&want));
        assert!(s.particular[1].equals(&want.neg()));
        assert!(s.particular[0].to_poly().is_none());
    }

    #[test]
    fn fraction_free_inconsistent_and_underdetermined() {
        let p = |s: &str| parse_poly(s).unwrap();
        let a = vec![vec![p("1"), p("1")], vec![p("2"), p("2")]];
        assert!(!solve_fraction_free(&a, &[p("1"), p("3")]).consistent);
        let s = solve_fraction_free(&a, &[p("1"), p("2")]);
        assert!(s.consistent);
        assert_eq!(s.nullspace.len(), 1);
        let v = &s.nullspace[0];
        assert!(v[0].add(&v[1]).is_zero());
        let _ = MPoly::zero();
    }
}
