//! Rank-one integral apartment classes: modular symbols over `ℤ`.
//!
//! Apartments of the building of `SL_2(ℚ)` are pairs of lines in `ℚ²`, and an
//! apartment class is integral exactly when the two primitive vectors
//! spanning those lines form a basis of `ℤ²`. A [`ModularSymbol`] stores the
//! two primitive column vectors; [`reduce`] writes an arbitrary symbol as a
//! telescoping sum of unimodular ones using continued fractions.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Vector = [i64; 2];
/// Row-major 2×2 integer matrix.
pub type Matrix = [[i64; 2]; 2];

/// `[[0, 1], [-1, 0]]`, the lift of the nontrivial Weyl group element.
pub const W: Matrix = [[0, 1], [-1, 0]];

/// A pair of primitive integer vectors with nonzero determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModularSymbol {
    v1: Vector,
    v2: Vector,
}

impl fmt::Display for ModularSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}:{},{}", self.v1[0], self.v1[1], self.v2[0], self.v2[1])
    }
}

/// Divides by the gcd and makes the first nonzero entry positive.
pub fn normalize(v: Vector) -> Result<Vector> {
    let g = v[0].gcd(&v[1]);
    if g == 0 {
        return Err(Error::InvalidSymbol("zero vector".into()));
    }
    let s = if v[0] < 0 || (v[0] == 0 && v[1] < 0) { -g } else { g };
    Ok([v[0] / s, v[1] / s])
}

pub fn det(a: Vector, b: Vector) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

impl ModularSymbol {
    /// Normalizes both columns; rejects zero columns and `det = 0`.
    pub fn new(v1: Vector, v2: Vector) -> Result<Self> {
        let (v1, v2) = (normalize(v1)?, normalize(v2)?);
        if det(v1, v2) == 0 {
            return Err(Error::InvalidSymbol(format!("columns {v1:?} and {v2:?} are parallel (det 0)")));
        }
        Ok(ModularSymbol { v1, v2 })
    }

    /// Parses `a,b:c,d` as the columns `(a,b)` and `(c,d)`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSymbol(format!("cannot parse {s:?}; expected a,b:c,d"));
        let (l, r) = s.split_once(':').ok_or_else(bad)?;
        let vec = |t: &str| -> Result<Vector> {
            let (x, y) = t.split_once(',').ok_or_else(bad)?;
            Ok([x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?])
        };
        Self::new(vec(l)?, vec(r)?)
    }

    pub fn columns(&self) -> (Vector, Vector) {
        (self.v1, self.v2)
    }

    pub fn det(&self) -> i64 {
        det(self.v1, self.v2)
    }

    /// `|det| = 1`: the columns form a basis of `ℤ²`.
    pub fn is_integral(&self) -> bool {
        self.det().abs() == 1
    }
}

/// Solves `a x + b y = 1` for primitive `(a, b)`.
fn bezout(a: i64, b: i64) -> (i64, i64) {
    let e = a.extended_gcd(&b);
    debug_assert_eq!(e.gcd, 1);
    (e.x, e.y)
}

fn apply(m: &Matrix, v: Vector) -> Vector {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn matdet(m: &Matrix) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Inverse of a matrix in `SL_2(ℤ)`.
fn inverse_sl2(m: &Matrix) -> Matrix {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

/// A path `u_0 = v_1, …, u_k = v_2` of primitive vectors in which consecutive
/// pairs have determinant `±1`, so `[v_1, v_2] = Σ [u_i, u_{i+1}]`.
///
/// Move `v_1` to `e_1` by some `γ₁ ∈ SL_2(ℤ)`; the image of `v_2` is then
/// `(x, y)` with `y = det(v_1, v_2)`, and the continued-fraction convergents
/// of `x/y` give the path from `(1, 0)` to `(x, y)`.
pub fn reduce(sym: &ModularSymbol) -> Vec<Vector> {
    let (v1, v2) = sym.columns();
    let (x0, y0) = bezout(v1[0], v1[1]);
    let gamma1: Matrix = [[v1[0], -y0], [v1[1], x0]];
    let inv = inverse_sl2(&gamma1);
    let mut w = apply(&inv, v2);
    if w[1] < 0 {
        w = [-w[0], -w[1]];
    }
    let (x, y) = (w[0], w[1]);
    debug_assert_eq!(y, sym.det().abs());

    let mut path = vec![[1, 0]];
    // convergents p_k/q_k of x/y; den > 0 throughout, so euclidean division is floor
    let (mut p_prev, mut q_prev) = (1i64, 0i64);
    let (mut num, mut den) = (x, y);
    let a0 = num.div_euclid(den);
    let (mut p, mut q) = (a0, 1i64);
    let mut residual = y.abs();
    loop {
        path.push([p, q]);
        let r = det([p, q], [x, y]).abs();
        assert!(r < residual, "continued fraction residual must decrease");
        residual = r;
        if r == 0 {
            break;
        }
        let rem = num.rem_euclid(den);
        (num, den) = (den, rem);
        let a = num.div_euclid(den);
        (p_prev, q_prev, p, q) = (p, q, a * p + p_prev, a * q + q_prev);
    }
    path.into_iter().map(|u| normalize(apply(&gamma1, u)).expect("nonzero")).collect()
}

/// The consecutive symbols of a reduction path.
pub fn path_symbols(path: &[Vector]) -> Vec<ModularSymbol> {
    path.windows(2).map(|w| ModularSymbol::new(w[0], w[1]).expect("consecutive path vectors are independent")).collect()
}

/// `γ = γ₁ W γ₁⁻¹` where `γ₁ ∈ SL_2(ℤ)` has the symbol's columns (the
/// second negated if `det = -1`). Then `γ γ₁ = γ₁ W`, so `γ` swaps the two
/// lines of the apartment and reverses the orientation of its class.
pub fn invert_integral(sym: &ModularSymbol) -> Result<(Matrix, Matrix)> {
    if !sym.is_integral() {
        return Err(Error::InvalidSymbol(format!("{sym} has det {}, not ±1", sym.det())));
    }
    let (v1, mut v2) = sym.columns();
    if sym.det() < 0 {
        v2 = [-v2[0], -v2[1]];
    }
    let gamma1: Matrix = [[v1[0], v2[0]], [v1[1], v2[1]]];
    let gamma = matmul(&matmul(&gamma1, &W), &inverse_sl2(&gamma1));
    Ok((gamma, gamma1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(a: i64, b: i64, c: i64, d: i64) -> ModularSymbol {
        ModularSymbol::new([a, b], [c, d]).unwrap()
    }

    #[test]
    fn integrality() {
        assert!(sym(1, 0, 0, 1).is_integral());
        assert!(!sym(1, 0, 5, 2).is_integral());
        assert!(sym(2, 1, 1, 1).is_integral());
        assert!(ModularSymbol::new([1, 0], [2, 0]).is_err());
        assert!(ModularSymbol::new([0, 0], [2, 1]).is_err());
    }

    #[test]
    fn parse_and_normalize() {
        let s = ModularSymbol::parse("2,0:-3,-6").unwrap();
        assert_eq!(s.columns(), ([1, 0], [1, 2]));
        assert!(ModularSymbol::parse("1,0;0,1").is_err());
        assert!(ModularSymbol::parse("1,x:0,1").is_err());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(&sym(1, 0, 0, 1)), vec![[1, 0], [0, 1]]);
        let path = reduce(&sym(1, 0, 5, 2));
        assert_eq!(path, vec![[1, 0], [2, 1], [5, 2]]);
        assert_eq!(det(path[0], path[1]), 1);
        assert_eq!(det(path[1], path[2]), -1);
    }

    #[test]
    fn inversion_examples() {
        let (g, _) = invert_integral(&sym(1, 0, 0, 1)).unwrap();
        assert_eq!(g, W);
        let (g, g1) = invert_integral(&sym(2, 1, 1, 1)).unwrap();
        assert_eq!(matdet(&g), 1);
        assert_eq!(matmul(&g, &g1), matmul(&g1, &W));
        assert!(invert_integral(&sym(1, 0, 5, 2)).is_err());
    }

    proptest! {
        #[test]
        fn paths_are_unimodular(a in -999i64..1000, b in -999i64..1000, c in -999i64..1000, d in -999i64..1000) {
            prop_assume!(a * d - b * c != 0 && (a, b) != (0, 0) && (c, d) != (0, 0));
            let s = ModularSymbol::new([a, b], [c, d]).unwrap();
            let path = reduce(&s);
            prop_assert_eq!(path[0], s.columns().0);
            prop_assert_eq!(*path.last().unwrap(), s.columns().1);
            for w in path.windows(2) {
                prop_assert_eq!(det(w[0], w[1]).abs(), 1);
            }
            prop_assert!(path_symbols(&path).iter().all(ModularSymbol::is_integral));
        }

        #[test]
        fn inversion_conjugates_w(word in proptest::collection::vec(0u8..4, 0..30)) {
            let gens: [Matrix; 4] = [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]], [[1, 0], [-1, 1]]];
            let g1 = word.iter().fold([[1, 0], [0, 1]], |acc, &k| matmul(&acc, &gens[k as usize]));
            let s = ModularSymbol::new([g1[0][0], g1[1][0]], [g1[0][1], g1[1][1]]).unwrap();
            let (g, gamma1) = invert_integral(&s).unwrap();
            prop_assert_eq!(matdet(&g), 1);
            prop_assert_eq!(matmul(&g, &gamma1), matmul(&gamma1, &W));
        }
    }
}
