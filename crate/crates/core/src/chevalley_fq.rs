//! Chevalley groups over prime fields as matrix groups: `SL_d(F_p)` (type
//! `A_{d-1}`) and `Sp_{2n}(F_p)` (type `C_n`).
//!
//! Coordinates are 0-based. For `Sp_{2n}` write `i' = 2n-1-i`. The form is
//! `J = Σ_{i<n} E_{i,i'} - Σ_{i<n} E_{i',i}`, so upper-triangular symplectic
//! matrices form the standard Borel subgroup and `⟨e_0, …, e_{k-1}⟩` is
//! isotropic for `k ≤ n`.
//!
//! Simple roots are `α_i = ε_i - ε_{i+1}` and, for `C_n`, `α_{n-1} = 2ε_{n-1}`.
//! The root elements are `x_α(t) = I + tX_α` with
//!
//! | root            | `X_α` in `SL_d`  | `X_α` in `Sp_{2n}`          |
//! |-----------------|------------------|-----------------------------|
//! | `ε_i - ε_j`     | `E_ij`           | `E_ij - E_{j'i'}`           |
//! | `ε_i + ε_j`     |                  | `E_{ij'} + E_{ji'}`         |
//! | `-(ε_i + ε_j)`  |                  | `E_{j'i} + E_{i'j}`         |
//! | `2ε_i`          |                  | `E_{ii'}`                   |
//! | `-2ε_i`         |                  | `E_{i'i}`                   |
//!
//! Every `X_α` squares to zero.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::field::{primitive_root, PrimeFieldElement};
use crate::ring::is_prime;
use crate::rootsys::{CartanType, Family, RootSystem};
use crate::weyl::{EnumerateOptions, WeylElement, WeylGroup};

pub const DEFAULT_GROUP_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupKind {
    #[serde(rename = "sl")]
    SpecialLinear,
    #[serde(rename = "sp")]
    Symplectic,
}

/// Which matrix group: kind, matrix size and field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Matrix size `d`.
    pub dim: usize,
    pub p: u32,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, dim: usize, p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p > 255 {
            return Err(Error::Unsupported(format!("p = {p}: matrix entries are stored as bytes, so p < 256")));
        }
        match kind {
            GroupKind::SpecialLinear if dim < 2 => {
                Err(Error::Unsupported(format!("SL_{dim} is not a Chevalley group of positive rank")))
            }
            GroupKind::Symplectic if dim < 4 || dim % 2 == 1 => {
                Err(Error::Unsupported(format!("Sp_{dim}: need an even size of at least 4 (Sp_2 is SL_2)")))
            }
            _ => Ok(GroupSpec { kind, dim, p }),
        }
    }

    pub fn sl(dim: usize, p: u32) -> Result<Self> {
        Self::new(GroupKind::SpecialLinear, dim, p)
    }

    pub fn sp(dim: usize, p: u32) -> Result<Self> {
        Self::new(GroupKind::Symplectic, dim, p)
    }

    /// Parses the group names used on the command line: `sl` or `sp`.
    pub fn parse(kind: &str, dim: usize, p: u32) -> Result<Self> {
        match kind.to_ascii_lowercase().as_str() {
            "sl" => Self::sl(dim, p),
            "sp" => Self::sp(dim, p),
            other => Err(Error::Unsupported(format!("unknown group {other:?}; expected sl or sp"))),
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        match self.kind {
            GroupKind::SpecialLinear => CartanType::new(Family::A, self.dim - 1),
            GroupKind::Symplectic => CartanType::new(Family::C, self.dim / 2),
        }
        .expect("validated in GroupSpec::new")
    }

    pub fn rank(&self) -> usize {
        self.cartan_type().rank
    }

    /// `|G(F_p)|` from the standard order formula.
    pub fn order_polynomial(&self) -> u128 {
        let q = self.p as u128;
        match self.kind {
            GroupKind::SpecialLinear => {
                let d = self.dim as u32;
                (2..=d).fold(q.pow(d * (d - 1) / 2), |acc, i| acc * (q.pow(i) - 1))
            }
            GroupKind::Symplectic => {
                let n = (self.dim / 2) as u32;
                (1..=n).fold(q.pow(n * n), |acc, i| acc * (q.pow(2 * i) - 1))
            }
        }
    }

    /// Cache key such as `SL3-F2`.
    pub fn key(&self) -> String {
        format!("{self}").replace('(', "-").replace(')', "")
    }

    fn mirror(&self, i: usize) -> usize {
        self.dim - 1 - i
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GroupKind::SpecialLinear => "SL",
            GroupKind::Symplectic => "Sp",
        };
        write!(f, "{k}{}(F{})", self.dim, self.p)
    }
}

/// A matrix in `G(F_p)`, entries row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    spec: GroupSpec,
    entries: Box<[u8]>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.spec, self.rows())
    }
}

impl GroupElement {
    pub fn identity(spec: GroupSpec) -> Self {
        let d = spec.dim;
        let mut entries = vec![0u8; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        GroupElement { spec, entries: entries.into() }
    }

    /// Validates membership in the group.
    pub fn from_rows(spec: GroupSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let d = spec.dim;
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Unsupported(format!("expected a {d}×{d} matrix")));
        }
        let p = spec.p as i64;
        let entries = rows.iter().flatten().map(|&v| v.rem_euclid(p) as u8).collect();
        let g = GroupElement { spec, entries };
        if g.det() != 1 {
            return Err(Error::Unsupported(format!("matrix is not in {spec}: determinant {}", g.det())));
        }
        if spec.kind == GroupKind::Symplectic && !g.preserves_form() {
            return Err(Error::Unsupported(format!("matrix does not preserve the symplectic form of {spec}")));
        }
        Ok(g)
    }

    fn from_entries(spec: GroupSpec, entries: Box<[u8]>) -> Self {
        GroupElement { spec, entries }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.spec.dim + j] as u32
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.spec.dim).map(|r| r.iter().map(|&v| v as u32).collect()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.spec)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::Mismatch { what: "groups", left: self.spec.to_string(), right: other.spec.to_string() });
        }
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let d = self.spec.dim;
        let p = self.spec.p;
        let mut out = vec![0u8; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u32;
                for k in 0..d {
                    acc += self.entries[i * d + k] as u32 * other.entries[k * d + j] as u32;
                }
                out[i * d + j] = (acc % p) as u8;
            }
        }
        Self::from_entries(self.spec, out.into())
    }

    /// `g · v` for a column vector `v`.
    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        let d = self.spec.dim;
        (0..d)
            .map(|i| {
                let acc: u32 = (0..d).map(|k| self.entries[i * d + k] as u32 * v[k] as u32).sum();
                (acc % self.spec.p) as u8
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.spec.dim;
        let entries = (0..d * d).map(|k| self.entries[(k % d) * d + k / d]).collect();
        Self::from_entries(self.spec, entries)
    }

    /// Gauss-Jordan inverse; group elements are always invertible.
    pub fn inverse(&self) -> Self {
        let d = self.spec.dim;
        let p = self.spec.p;
        let mut a: Vec<Vec<u32>> = self.rows();
        let mut inv: Vec<Vec<u32>> = (0..d).map(|i| (0..d).map(|j| (i == j) as u32).collect()).collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| a[r][col] != 0).expect("invertible matrix");
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = PrimeFieldElement::reduce(a[col][col] as i64, p).pow(p as u64 - 2).residue();
            for j in 0..d {
                a[col][j] = a[col][j] * s % p;
                inv[col][j] = inv[col][j] * s % p;
            }
            for r in 0..d {
                let f = a[r][col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..d {
                    a[r][j] = (a[r][j] + (p - f) * a[col][j]) % p;
                    inv[r][j] = (inv[r][j] + (p - f) * inv[col][j]) % p;
                }
            }
        }
        let entries = inv.into_iter().flatten().map(|v| v as u8).collect();
        Self::from_entries(self.spec, entries)
    }

    pub fn det(&self) -> u32 {
        let d = self.spec.dim;
        let p = self.spec.p;
        let mut a = self.rows();
        let mut det = 1u32;
        for col in 0..d {
            let Some(piv) = (col..d).find(|&r| a[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                a.swap(col, piv);
                det = (p - det) % p;
            }
            det = det * a[col][col] % p;
            let s = PrimeFieldElement::reduce(a[col][col] as i64, p).pow(p as u64 - 2).residue();
            for r in col + 1..d {
                let f = a[r][col] * s % p;
                if f == 0 {
                    continue;
                }
                for j in col..d {
                    a[r][j] = (a[r][j] + (p - f) * a[col][j]) % p;
                }
            }
        }
        det
    }

    /// `gᵀ J g = J` for the standard alternating form.
    pub fn preserves_form(&self) -> bool {
        let j = form_matrix(self.spec);
        self.transpose().mul(&j).mul(self) == j
    }

    pub fn is_upper_triangular(&self) -> bool {
        let d = self.spec.dim;
        (0..d).all(|i| (0..i).all(|j| self.entries[i * d + j] == 0))
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.spec.dim;
        (0..d).all(|i| (0..d).all(|j| i == j || self.entries[i * d + j] == 0))
    }

    /// Exactly one nonzero entry per row and column.
    pub fn is_monomial(&self) -> bool {
        let d = self.spec.dim;
        (0..d).all(|i| (0..d).filter(|&j| self.entries[i * d + j] != 0).count() == 1)
            && (0..d).all(|j| (0..d).filter(|&i| self.entries[i * d + j] != 0).count() == 1)
    }

    /// For a monomial matrix, `π` with `g e_j ∈ F_p^× e_{π(j)}`.
    fn monomial_permutation(&self) -> Vec<usize> {
        let d = self.spec.dim;
        (0..d).map(|j| (0..d).find(|&i| self.entries[i * d + j] != 0).expect("monomial")).collect()
    }
}

/// The matrix `J` of the alternating form; also a group element of `Sp`.
/// Not meaningful for `SL`, where the identity is returned.
pub fn form_matrix(spec: GroupSpec) -> GroupElement {
    if spec.kind == GroupKind::SpecialLinear {
        return GroupElement::identity(spec);
    }
    let d = spec.dim;
    let n = d / 2;
    let mut entries = vec![0u8; d * d];
    for i in 0..d {
        let v = if i < n { 1 } else { spec.p - 1 };
        entries[i * d + spec.mirror(i)] = v as u8;
    }
    GroupElement::from_entries(spec, entries.into())
}

/// A concrete Chevalley group with its root data.
#[derive(Debug, Clone)]
pub struct ChevalleyGroup {
    spec: GroupSpec,
    rs: RootSystem,
    /// Support of `X_α` with coefficients ±1, per root index.
    root_matrices: Vec<Vec<(usize, usize, i64)>>,
}

impl ChevalleyGroup {
    pub fn new(spec: GroupSpec) -> Self {
        let rs = RootSystem::build(spec.cartan_type());
        let root_matrices =
            (0..rs.num_roots()).map(|k| root_matrix(spec, &epsilon_coordinates(spec, rs.root(k)))).collect();
        ChevalleyGroup { spec, rs, root_matrices }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.spec)
    }

    fn field_element(&self, t: PrimeFieldElement) -> Result<u32> {
        if t.modulus() != self.spec.p {
            return Err(Error::Mismatch {
                what: "fields",
                left: format!("F{}", t.modulus()),
                right: format!("F{}", self.spec.p),
            });
        }
        Ok(t.residue())
    }

    /// `x_α(t)` for the root with coefficient vector `alpha`.
    pub fn x_alpha(&self, alpha: &[i64], t: PrimeFieldElement) -> Result<GroupElement> {
        let k = self.rs.index_of(alpha).ok_or_else(|| Error::NotARoot(alpha.to_vec()))?;
        Ok(self.x_root(k, self.field_element(t)?))
    }

    /// `x_α(t)` for the root with canonical index `k`.
    pub fn x_root(&self, k: usize, t: u32) -> GroupElement {
        let p = self.spec.p as i64;
        let d = self.spec.dim;
        let mut g = self.identity();
        let mut entries = g.entries.to_vec();
        for &(i, j, c) in &self.root_matrices[k] {
            entries[i * d + j] = ((c * t as i64).rem_euclid(p)) as u8;
        }
        g.entries = entries.into();
        g
    }

    /// Support of `X_α` as `(row, col, ±1)`.
    pub fn root_matrix(&self, k: usize) -> &[(usize, usize, i64)] {
        &self.root_matrices[k]
    }

    /// `h_i(u)`, the coroot of the `i`-th simple root evaluated at `u`.
    pub fn torus_element(&self, i: usize, u: PrimeFieldElement) -> Result<GroupElement> {
        let rank = self.rs.rank();
        if i >= rank {
            return Err(Error::IndexOutOfRange { index: i, rank });
        }
        let u = PrimeFieldElement::reduce(self.field_element(u)? as i64, self.spec.p);
        let inv = u.inverse()?;
        let mut diag = vec![1u32; self.spec.dim];
        let mirror = |k| self.spec.mirror(k);
        match self.spec.kind {
            GroupKind::SpecialLinear => {
                diag[i] = u.residue();
                diag[i + 1] = inv.residue();
            }
            GroupKind::Symplectic if i + 1 < rank => {
                diag[i] = u.residue();
                diag[i + 1] = inv.residue();
                diag[mirror(i + 1)] = u.residue();
                diag[mirror(i)] = inv.residue();
            }
            GroupKind::Symplectic => {
                diag[i] = u.residue();
                diag[mirror(i)] = inv.residue();
            }
        }
        let d = self.spec.dim;
        let mut entries = vec![0u8; d * d];
        for (k, &v) in diag.iter().enumerate() {
            entries[k * d + k] = v as u8;
        }
        Ok(GroupElement::from_entries(self.spec, entries.into()))
    }

    /// `h_i(g)` for a primitive root `g`, one per simple root. These generate
    /// the diagonal subgroup `H(F_p)`.
    pub fn torus_generators(&self) -> Vec<GroupElement> {
        let g = PrimeFieldElement::reduce(primitive_root(self.spec.p) as i64, self.spec.p);
        (0..self.rs.rank()).map(|i| self.torus_element(i, g).expect("valid simple index")).collect()
    }

    /// All of `H(F_p)`, sorted.
    pub fn torus(&self) -> Vec<GroupElement> {
        closure(self.identity(), &self.torus_generators())
    }

    /// `w_α = x_α(1) x_{-α}(1)⁻¹ x_α(1)`.
    pub fn weyl_lift(&self, alpha: &[i64]) -> Result<GroupElement> {
        let k = self.rs.index_of(alpha).ok_or_else(|| Error::NotARoot(alpha.to_vec()))?;
        Ok(self.weyl_lift_root(k))
    }

    pub fn weyl_lift_root(&self, k: usize) -> GroupElement {
        let x = self.x_root(k, 1);
        let y_inv = self.x_root(self.rs.negate(k), self.spec.p - 1);
        x.mul(&y_inv).mul(&x)
    }

    pub fn weyl_lift_simple(&self, i: usize) -> GroupElement {
        self.weyl_lift_root(self.rs.simple_index(i))
    }

    /// Product of simple-root lifts along the canonical reduced word of `w`.
    pub fn weyl_lift_element(&self, w: &WeylElement) -> GroupElement {
        w.reduced_word(&self.rs).into_iter().fold(self.identity(), |acc, i| acc.mul(&self.weyl_lift_simple(i)))
    }

    /// `x_{±α_i}(1)` for every simple root: a generating set.
    pub fn unipotent_generators(&self) -> Vec<GroupElement> {
        (0..self.rs.rank())
            .flat_map(|i| {
                let k = self.rs.simple_index(i);
                [self.x_root(k, 1), self.x_root(self.rs.negate(k), 1)]
            })
            .collect()
    }

    /// Unipotent generators followed by torus generators.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut g = self.unipotent_generators();
        g.extend(self.torus_generators().into_iter().filter(|h| !h.is_identity()));
        g
    }

    pub fn enumerate(&self, opts: &GroupEnumOptions) -> Result<GroupEnumeration> {
        GroupEnumeration::new(self, opts)
    }

    /// The root `β` with `g X_α g⁻¹ ∈ F_p^× X_β`, for monomial `g`.
    fn conjugate_root(&self, perm: &[usize], support: &HashMap<(usize, usize), usize>, k: usize) -> usize {
        let (i, j, _) = self.root_matrices[k][0];
        support[&(perm[i], perm[j])]
    }

    /// Checks that `N(H)/H ≅ W` with `w_α H ↦ s_α`.
    ///
    /// `N(H)(F_p)` is taken to be the monomial matrices in `G(F_p)`, the
    /// points of the normalizer of the diagonal torus. This differs from the
    /// set-theoretic normalizer of the finite group `H(F_p)` when that group
    /// is too small to see the torus (e.g. `H(F_3) = {±I}` in `SL_2`, which
    /// is central); the latter is reported as `set_normalizer_order`.
    ///
    /// The map to `W` sends `n` to its permutation of the root subgroups,
    /// which is its permutation of the chambers of the standard apartment.
    pub fn weyl_iso_check(&self, group: &GroupEnumeration) -> Result<WeylIsoReport> {
        let weyl = WeylGroup::enumerate(&self.rs, &EnumerateOptions::default())?;
        let torus: HashSet<GroupElement> = self.torus().into_iter().collect();
        let normalizer: Vec<&GroupElement> = group.elements().iter().filter(|g| g.is_monomial()).collect();

        let mut support = HashMap::new();
        for (k, m) in self.root_matrices.iter().enumerate() {
            for &(i, j, _) in m {
                support.insert((i, j), k);
            }
        }
        let image_of = |g: &GroupElement| -> Option<usize> {
            let perm = g.monomial_permutation();
            let roots: Box<[u16]> =
                (0..self.rs.num_roots()).map(|k| self.conjugate_root(&perm, &support, k) as u16).collect();
            weyl.index_of(&WeylElement::from_perm(self.rs.kind(), roots))
        };
        let images: Vec<Option<usize>> = normalizer.iter().map(|g| image_of(g)).collect();
        let well_defined = images.iter().all(Option::is_some);
        let images: Vec<usize> = images.into_iter().flatten().collect();

        let mut homomorphism = well_defined;
        if well_defined {
            let pos: HashMap<&GroupElement, usize> = normalizer.iter().enumerate().map(|(k, g)| (*g, k)).collect();
            'outer: for (a, ga) in normalizer.iter().enumerate() {
                for (b, gb) in normalizer.iter().enumerate() {
                    let ab = ga.mul(gb);
                    let Some(&c) = pos.get(&ab) else {
                        homomorphism = false;
                        break 'outer;
                    };
                    if images[c] != weyl.product(images[a], images[b]) {
                        homomorphism = false;
                        break 'outer;
                    }
                }
            }
        }
        let image_set: HashSet<usize> = images.iter().copied().collect();
        let surjective = image_set.len() == weyl.order();
        let kernel: HashSet<&GroupElement> =
            normalizer.iter().zip(&images).filter(|&(_, &w)| w == 0).map(|(g, _)| *g).collect();
        let kernel_is_torus = well_defined && kernel.len() == torus.len() && torus.iter().all(|h| kernel.contains(h));
        let generators_ok = (0..self.rs.rank()).all(|i| {
            let lift = self.weyl_lift_simple(i);
            lift.is_monomial() && image_of(&lift) == Some(weyl.left_generator(0, i))
        });

        let gens = self.torus_generators();
        let set_normalizer_order = group
            .elements()
            .iter()
            .filter(|g| {
                let gi = g.inverse();
                gens.iter().all(|h| torus.contains(&g.mul(h).mul(&gi)))
            })
            .count();
        let degenerate_torus = torus.len() == 1;
        Ok(WeylIsoReport {
            group: self.spec.to_string(),
            normalizer_order: normalizer.len(),
            torus_order: torus.len(),
            quotient_order: normalizer.len() / torus.len(),
            weyl_order: weyl.order(),
            set_normalizer_order,
            homomorphism,
            surjective,
            kernel_is_torus,
            generators_ok,
            degenerate_torus,
            note: degenerate_torus.then(|| {
                "H(F_p) is trivial; N(H) consists of the monomial matrices with entries ±1 and the quotient map is injective".to_string()
            }),
        })
    }

    /// For adjacent simple roots, the alternating products of `w_α`, `w_β`
    /// with `m_{αβ}` factors agree modulo `H(F_p)`.
    pub fn braid_relations_hold(&self) -> bool {
        let coxeter = self.rs.cartan_and_coxeter().coxeter;
        let rank = self.rs.rank();
        let lifts: Vec<GroupElement> = (0..rank).map(|i| self.weyl_lift_simple(i)).collect();
        (0..rank).all(|a| {
            (a + 1..rank).all(|b| {
                let m = coxeter[a][b] as usize;
                let alt = |x: usize, y: usize| {
                    (0..m).fold(self.identity(), |acc, k| acc.mul(&lifts[if k % 2 == 0 { x } else { y }]))
                };
                let lhs = alt(a, b);
                let rhs = alt(b, a);
                lhs.inverse().mul(&rhs).is_diagonal()
            })
        })
    }
}

/// Result of the `N(H)/H ≅ W` check.
#[derive(Debug, Clone, Serialize)]
pub struct WeylIsoReport {
    pub group: String,
    pub normalizer_order: usize,
    pub torus_order: usize,
    pub quotient_order: usize,
    pub weyl_order: usize,
    pub set_normalizer_order: usize,
    pub homomorphism: bool,
    pub surjective: bool,
    pub kernel_is_torus: bool,
    pub generators_ok: bool,
    pub degenerate_torus: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl WeylIsoReport {
    pub fn passed(&self) -> bool {
        self.homomorphism
            && self.surjective
            && self.kernel_is_torus
            && self.generators_ok
            && self.quotient_order == self.weyl_order
    }
}

/// `ε`-coordinates of a root given by simple-root coefficients.
fn epsilon_coordinates(spec: GroupSpec, c: &[i64]) -> Vec<i64> {
    let n = c.len();
    let at = |k: usize| if k < n { c[k] } else { 0 };
    match spec.kind {
        GroupKind::SpecialLinear => (0..=n).map(|k| at(k) - if k > 0 { at(k - 1) } else { 0 }).collect(),
        GroupKind::Symplectic => (0..n)
            .map(|k| {
                let prev = if k > 0 { c[k - 1] } else { 0 };
                if k + 1 == n {
                    2 * c[k] - prev
                } else {
                    c[k] - prev
                }
            })
            .collect(),
    }
}

fn root_matrix(spec: GroupSpec, e: &[i64]) -> Vec<(usize, usize, i64)> {
    let find = |v: i64| -> Vec<usize> { (0..e.len()).filter(|&k| e[k] == v).collect() };
    let (plus, minus) = (find(1), find(-1));
    let m = |k: usize| spec.mirror(k);
    match spec.kind {
        GroupKind::SpecialLinear => vec![(plus[0], minus[0], 1)],
        GroupKind::Symplectic => match (plus.as_slice(), minus.as_slice()) {
            (&[i], &[j]) => vec![(i, j, 1), (m(j), m(i), -1)],
            (&[i, j], &[]) => vec![(i, m(j), 1), (j, m(i), 1)],
            (&[], &[i, j]) => vec![(m(j), i, 1), (m(i), j, 1)],
            (&[], &[]) => {
                let two = find(2);
                if let [i] = two[..] {
                    vec![(i, m(i), 1)]
                } else {
                    let i = find(-2)[0];
                    vec![(m(i), i, 1)]
                }
            }
            _ => unreachable!("not a root of C_n: {e:?}"),
        },
    }
}

/// The subgroup generated by `gens`, sorted.
fn closure(start: GroupElement, gens: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.mul(s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    let mut out: Vec<GroupElement> = seen.into_iter().collect();
    out.sort();
    out
}

#[derive(Debug, Clone)]
pub struct GroupEnumOptions {
    pub cap: u128,
    pub cache: Option<Cache>,
}

impl Default for GroupEnumOptions {
    fn default() -> Self {
        GroupEnumOptions { cap: DEFAULT_GROUP_CAP, cache: None }
    }
}

/// Every element of `G(F_p)` in lexicographic order of entries.
#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    spec: GroupSpec,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
    generators: Vec<GroupElement>,
    from_cache: bool,
}

impl GroupEnumeration {
    fn new(group: &ChevalleyGroup, opts: &GroupEnumOptions) -> Result<Self> {
        let spec = group.spec;
        let order = spec.order_polynomial();
        if order > opts.cap {
            return Err(Error::CapExceeded { what: format!("{spec}"), required: order, cap: opts.cap });
        }
        let generators = group.unipotent_generators();
        let key = spec.key();
        if let Some(cache) = &opts.cache {
            if let Some(records) = cache.load("group", &key)? {
                if let Some(elements) = Self::from_records(spec, &records) {
                    return Ok(Self::assemble(spec, elements, generators, true));
                }
            }
        }
        let elements = closure(group.identity(), &generators);
        if let Some(cache) = &opts.cache {
            cache.store(
                "group",
                &key,
                elements.iter().map(|g| g.entries.iter().map(|&v| v as i64).collect::<Vec<i64>>()),
            )?;
        }
        Ok(Self::assemble(spec, elements, generators, false))
    }

    fn from_records(spec: GroupSpec, records: &[Vec<i64>]) -> Option<Vec<GroupElement>> {
        let d2 = spec.dim * spec.dim;
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            if r.len() != d2 || r.iter().any(|&v| v < 0 || v >= spec.p as i64) {
                return None;
            }
            out.push(GroupElement::from_entries(spec, r.iter().map(|&v| v as u8).collect()));
        }
        let sorted = out.windows(2).all(|w| w[0] < w[1]);
        (sorted && out.len() as u128 == spec.order_polynomial() && out.first()?.det() == 1).then_some(out)
    }

    fn assemble(spec: GroupSpec, elements: Vec<GroupElement>, generators: Vec<GroupElement>, from_cache: bool) -> Self {
        let index = elements.iter().enumerate().map(|(k, g)| (g.clone(), k as u32)).collect();
        GroupEnumeration { spec, elements, index, generators, from_cache }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).map(|&k| k as usize)
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// The generators the enumeration was closed under.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn was_loaded_from_cache(&self) -> bool {
        self.from_cache
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: i64, p: u32) -> PrimeFieldElement {
        PrimeFieldElement::new(v, p).unwrap()
    }

    fn sl(d: usize, p: u32) -> ChevalleyGroup {
        ChevalleyGroup::new(GroupSpec::sl(d, p).unwrap())
    }

    fn sp(d: usize, p: u32) -> ChevalleyGroup {
        ChevalleyGroup::new(GroupSpec::sp(d, p).unwrap())
    }

    fn mat(g: &GroupElement) -> Vec<Vec<u32>> {
        g.rows()
    }

    fn nilpotent(g: &GroupElement, power: u32) -> bool {
        let spec = g.spec();
        let d = spec.dim;
        let rows: Vec<Vec<i64>> =
            (0..d).map(|i| (0..d).map(|j| g.entry(i, j) as i64 - (i == j) as i64).collect()).collect();
        let p = spec.p as i64;
        let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
            (0..d)
                .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(p)).collect())
                .collect()
        };
        let mut acc = rows.clone();
        for _ in 1..power {
            acc = mul(&acc, &rows);
        }
        acc.iter().flatten().all(|&v| v == 0)
    }

    #[test]
    fn spec_validation() {
        assert!(GroupSpec::sl(1, 3).is_err());
        assert!(GroupSpec::sp(2, 3).is_err());
        assert!(GroupSpec::sp(5, 3).is_err());
        assert!(GroupSpec::sl(3, 4).is_err());
        assert!(GroupSpec::sl(3, 257).is_err());
        assert_eq!(GroupSpec::sp(4, 2).unwrap().cartan_type().to_string(), "C2");
        assert_eq!(GroupSpec::sl(3, 2).unwrap().key(), "SL3-F2");
    }

    #[test]
    fn sl2_root_elements() {
        let g = sl(2, 5);
        assert_eq!(mat(&g.x_alpha(&[1], fe(3, 5)).unwrap()), vec![vec![1, 3], vec![0, 1]]);
        assert_eq!(mat(&g.x_alpha(&[-1], fe(3, 5)).unwrap()), vec![vec![1, 0], vec![3, 1]]);
        assert!(g.x_alpha(&[1], fe(0, 5)).unwrap().is_identity());
        assert!(g.x_alpha(&[2], fe(1, 5)).is_err());
        assert!(g.x_alpha(&[1], fe(1, 3)).is_err());
    }

    #[test]
    fn one_parameter_relation() {
        for group in [sl(2, 5), sl(3, 3), sp(4, 3), sp(4, 5), sp(6, 3), sl(4, 7)] {
            let p = group.spec().p;
            let d = group.spec().dim as u32;
            for k in 0..group.root_system().num_roots() {
                assert!(nilpotent(&group.x_root(k, 1), 2.min(d)));
                for t in 0..p {
                    for u in 0..p {
                        let lhs = group.x_root(k, t).mul(&group.x_root(k, u));
                        assert_eq!(lhs, group.x_root(k, (t + u) % p));
                    }
                }
            }
        }
    }

    #[test]
    fn symplectic_root_elements_preserve_form() {
        for group in [sp(4, 3), sp(6, 5), sp(8, 2)] {
            for k in 0..group.root_system().num_roots() {
                let x = group.x_root(k, 1);
                assert!(x.preserves_form(), "{:?}", group.root_system().root(k));
                assert!(nilpotent(&x, 2));
                assert_eq!(x.is_upper_triangular(), group.root_system().is_positive(k));
            }
        }
    }

    #[test]
    fn torus_elements() {
        let g = sl(2, 7);
        let h = g.torus_element(0, fe(3, 7)).unwrap();
        assert_eq!(mat(&h), vec![vec![3, 0], vec![0, 5]]);
        assert_eq!(g.torus_element(0, fe(0, 7)), Err(Error::ZeroInverse));
        assert!(g.torus_element(1, fe(1, 7)).is_err());
        assert!(sl(3, 2).torus().len() == 1);
        assert_eq!(sl(3, 3).torus().len(), 4);
        for group in [sl(3, 5), sp(4, 5), sp(6, 3)] {
            for h in group.torus_generators() {
                assert!(h.is_diagonal());
                assert_eq!(h.det(), 1);
                if group.spec().kind == GroupKind::Symplectic {
                    assert!(h.preserves_form());
                }
                let hi = h.inverse();
                for k in 0..group.root_system().num_roots() {
                    let c = h.mul(&group.x_root(k, 1)).mul(&hi);
                    assert!((1..group.spec().p).any(|t| group.x_root(k, t) == c));
                }
            }
        }
    }

    #[test]
    fn weyl_lifts() {
        let g = sl(2, 5);
        let w = g.weyl_lift(&[1]).unwrap();
        assert_eq!(mat(&w), vec![vec![0, 1], vec![4, 0]]);
        assert!(w.mul(&w).mul(&w).mul(&w).is_identity());
        let s = sp(4, 3);
        let long = s.weyl_lift_simple(1);
        assert!(long.is_monomial() && long.preserves_form());
        for group in [sl(3, 3), sl(4, 2), sp(4, 3), sp(6, 5)] {
            assert!(group.braid_relations_hold());
            let torus = group.torus();
            for k in 0..group.root_system().num_roots() {
                let w = group.weyl_lift_root(k);
                let wi = w.inverse();
                for h in &torus {
                    assert!(torus.binary_search(&w.mul(h).mul(&wi)).is_ok());
                }
            }
        }
    }

    #[test]
    fn inverse_and_det() {
        let g = sp(4, 5);
        let x = g.x_root(3, 2).mul(&g.weyl_lift_simple(0)).mul(&g.x_root(5, 4));
        assert!(x.mul(&x.inverse()).is_identity());
        assert_eq!(x.det(), 1);
        assert!(GroupElement::from_rows(
            g.spec(),
            &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        )
        .is_err());
        assert!(x.multiply(&sl(4, 5).identity()).is_err());
    }

    #[test]
    fn enumeration_matches_order_polynomial() {
        for (group, expect) in [(sl(2, 3), 24), (sl(3, 2), 168), (sp(4, 2), 720), (sl(2, 5), 120), (sl(3, 3), 5616)] {
            let e = group.enumerate(&GroupEnumOptions::default()).unwrap();
            assert_eq!(e.order(), expect);
            assert_eq!(group.spec().order_polynomial(), expect as u128);
            assert!(e.elements().windows(2).all(|w| w[0] < w[1]));
        }
        let big = sp(6, 3).enumerate(&GroupEnumOptions::default());
        assert!(matches!(big, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let opts = GroupEnumOptions { cache: Some(Cache::new(dir.path())), ..Default::default() };
        let g = sl(3, 2);
        let a = g.enumerate(&opts).unwrap();
        let b = g.enumerate(&opts).unwrap();
        assert!(!a.was_loaded_from_cache());
        assert!(b.was_loaded_from_cache());
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn weyl_isomorphism_over_f3() {
        for (group, n, h, w) in [(sl(2, 3), 4, 2, 2), (sl(3, 3), 24, 4, 6), (sp(4, 3), 32, 4, 8)] {
            let e = group.enumerate(&GroupEnumOptions::default()).unwrap();
            let r = group.weyl_iso_check(&e).unwrap();
            assert_eq!(r.normalizer_order, n);
            assert_eq!(r.torus_order, h);
            assert_eq!(r.quotient_order, w);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn weyl_isomorphism_degenerate_torus() {
        let group = sl(3, 2);
        let e = group.enumerate(&GroupEnumOptions::default()).unwrap();
        let r = group.weyl_iso_check(&e).unwrap();
        assert!(r.degenerate_torus && r.note.is_some());
        assert!(r.passed());
    }
}
