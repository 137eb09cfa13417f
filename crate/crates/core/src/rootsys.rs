//! Irreducible crystallographic root systems.
//!
//! Roots are stored as integer coefficient vectors over the simple roots, so
//! no irrational coordinates ever appear. Simple roots follow the Bourbaki
//! numbering (0-based here):
//!
//! | type | diagram (index: squared length) |
//! |------|---------------------------------|
//! | A_n  | chain 0-1-…-(n-1), all length 2 |
//! | B_n  | chain, last root short (1), the rest 2; double bond at the end |
//! | C_n  | chain, last root long (4), the rest 2; double bond at the end |
//! | D_n  | chain 0-…-(n-2), root n-1 attached to n-3 |
//! | E_n  | chain 0-2-3-…-(n-1), root 1 attached to 3 |
//! | F_4  | 0-1 long (4), 2-3 short (2), double bond 1=2 |
//! | G_2  | 0 short (2), 1 long (6), triple bond |
//!
//! The Cartan matrix is `cartan[i][j] = <α_i, α_j^∨> = 2(α_i, α_j)/(α_j, α_j)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Lie type letter of an irreducible root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn from_char(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A legal (family, rank) pair such as `A2` or `E6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let bad = |constraint| Err(Error::IllegalType { label: family.letter(), rank, constraint });
        match family {
            Family::A if rank < 1 => return bad("A_n needs n >= 1"),
            Family::B if rank < 2 => return bad("B_n needs n >= 2"),
            Family::C if rank < 2 => return bad("C_n needs n >= 2"),
            Family::D if rank < 3 => return bad("D_n needs n >= 3"),
            Family::E if !(6..=8).contains(&rank) => return bad("E_n exists only for n = 6, 7, 8"),
            Family::F if rank != 4 => return bad("F_n exists only for n = 4"),
            Family::G if rank != 2 => return bad("G_n exists only for n = 2"),
            _ => {}
        }
        Ok(CartanType { family, rank })
    }

    /// Parses `"A"`/`"a"` plus a rank.
    pub fn parse(label: &str, rank: usize) -> Result<Self> {
        let mut chars = label.chars();
        match (chars.next().and_then(Family::from_char), chars.next()) {
            (Some(family), None) => CartanType::new(family, rank),
            _ => Err(Error::IllegalType {
                label: label.chars().next().unwrap_or('?'),
                rank,
                constraint: "type must be one of A, B, C, D, E, F, G",
            }),
        }
    }

    /// Gram matrix of the simple roots under an integer-valued invariant form.
    fn gram(self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut g = vec![vec![0i64; n]; n];
        let bond = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self.family {
            Family::A | Family::D | Family::E => {
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = 2;
                }
                match self.family {
                    Family::A => (0..n - 1).for_each(|i| bond(&mut g, i, i + 1, -1)),
                    Family::D => {
                        (0..n - 2).for_each(|i| bond(&mut g, i, i + 1, -1));
                        bond(&mut g, n - 3, n - 1, -1);
                    }
                    _ => {
                        bond(&mut g, 0, 2, -1);
                        bond(&mut g, 1, 3, -1);
                        (2..n - 1).for_each(|i| bond(&mut g, i, i + 1, -1));
                    }
                }
            }
            Family::B => {
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = if i == n - 1 { 1 } else { 2 };
                }
                (0..n - 1).for_each(|i| bond(&mut g, i, i + 1, -1));
            }
            Family::C => {
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = if i == n - 1 { 4 } else { 2 };
                }
                (0..n - 2).for_each(|i| bond(&mut g, i, i + 1, -1));
                bond(&mut g, n - 2, n - 1, -2);
            }
            Family::F => {
                g[0][0] = 4;
                g[1][1] = 4;
                g[2][2] = 2;
                g[3][3] = 2;
                bond(&mut g, 0, 1, -2);
                bond(&mut g, 1, 2, -2);
                bond(&mut g, 2, 3, -1);
            }
            Family::G => {
                g[0][0] = 2;
                g[1][1] = 6;
                bond(&mut g, 0, 1, -3);
            }
        }
        g
    }

    /// Closed-form `|Φ⁺|`.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::B | Family::C, _) => n * n,
            (Family::D, _) => n * (n - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            (Family::E, _) => 120,
            (Family::F, _) => 24,
            (Family::G, _) => 6,
        }
    }

    /// Closed-form `|W|`.
    pub fn weyl_order(self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match (self.family, self.rank) {
            (Family::A, _) => fact(n + 1),
            (Family::B | Family::C, _) => (1u128 << n) * fact(n),
            (Family::D, _) => (1u128 << (n - 1)) * fact(n),
            (Family::E, 6) => 51_840,
            (Family::E, 7) => 2_903_040,
            (Family::E, _) => 696_729_600,
            (Family::F, _) => 1152,
            (Family::G, _) => 12,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Cartan and Coxeter matrices of a root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanData {
    pub cartan: Vec<Vec<i64>>,
    pub coxeter: Vec<Vec<u32>>,
}

/// An irreducible root system with its roots in canonical order.
///
/// Roots `0..npos` are the positive roots sorted by (height, coefficient
/// vector); root `k + npos` is the negative of root `k`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: CartanType,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    npos: usize,
    index: HashMap<Vec<i64>, usize>,
    /// `reflections[i][k]` is the index of `s_i(root k)`.
    reflections: Vec<Vec<u32>>,
}

impl RootSystem {
    pub fn build(kind: CartanType) -> Self {
        let n = kind.rank;
        let gram = kind.gram();
        let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();

        let reflect = |beta: &[i64], i: usize| -> Vec<i64> {
            let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
            let mut out = beta.to_vec();
            out[i] -= pairing;
            out
        };

        // Every root is W-conjugate to a simple root.
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                let img = reflect(&beta, i);
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }

        let mut positive: Vec<Vec<i64>> = seen.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let npos = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
        let index: HashMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();
        let reflections = (0..n).map(|i| roots.iter().map(|r| index[&reflect(r, i)] as u32).collect()).collect();

        RootSystem { kind, cartan, roots, npos, index, reflections }
    }

    pub fn from_label(label: &str, rank: usize) -> Result<Self> {
        Ok(Self::build(CartanType::parse(label, rank)?))
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &[i64] {
        &self.roots[k]
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.npos
    }

    pub fn negate(&self, k: usize) -> usize {
        if k < self.npos {
            k + self.npos
        } else {
            k - self.npos
        }
    }

    pub fn index_of(&self, beta: &[i64]) -> Option<usize> {
        self.index.get(beta).copied()
    }

    /// Index of the simple root `α_i`.
    pub fn simple_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        self.index[&e]
    }

    /// Permutation of root indices induced by `s_i`.
    pub fn reflection_table(&self, i: usize) -> &[u32] {
        &self.reflections[i]
    }

    /// `s_i(β) = β − <β, α_i^∨> α_i`.
    pub fn simple_reflection_image(&self, i: usize, beta: &[i64]) -> Result<Vec<i64>> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank() });
        }
        let k = self.index_of(beta).ok_or_else(|| Error::NotARoot(beta.to_vec()))?;
        Ok(self.roots[self.reflections[i][k] as usize].clone())
    }

    pub fn cartan_and_coxeter(&self) -> CartanData {
        let n = self.rank();
        let coxeter = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            1
                        } else {
                            match self.cartan[i][j] * self.cartan[j][i] {
                                0 => 2,
                                1 => 3,
                                2 => 4,
                                3 => 6,
                                other => unreachable!("Cartan product {other} in a finite type"),
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        CartanData { cartan: self.cartan.clone(), coxeter }
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Virtual cohomological dimension of the Chevalley group over `ℤ`.
    ///
    /// The symmetric space of the split real form has dimension
    /// `r = |Φ⁺| + rk(Φ)`, and the vcd is `r − rk(Φ)`.
    pub fn vcd_over_z(&self) -> usize {
        self.symmetric_space_dim() - self.rank()
    }

    /// Real dimension of the symmetric space of the split real form.
    pub fn symmetric_space_dim(&self) -> usize {
        self.npos + self.rank()
    }

    /// vcd over a named ring of integers; only `Z` is supported.
    pub fn vcd(&self, ring: &str) -> Result<usize> {
        match ring {
            "Z" | "ZZ" | "z" => Ok(self.vcd_over_z()),
            other => Err(Error::Unsupported(format!("vcd is implemented only over Z, not over {other}"))),
        }
    }

    pub fn height(&self, k: usize) -> i64 {
        self.roots[k].iter().sum()
    }
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for RootSystem {}
