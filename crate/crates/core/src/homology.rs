//! Typed simplicial complexes, chains and reduced homology.
//!
//! Every vertex carries a type (an index into the Coxeter generating set) and
//! every simplex has pairwise distinct vertex types. Simplices are stored with
//! their vertices sorted by `(type, id)`, and that order fixes the
//! orientation. Type-preserving simplicial maps therefore send oriented
//! simplices to oriented simplices with no sign change.
//!
//! Degrees run from `-1` (the augmentation, a single empty simplex) to the
//! chamber dimension, so every homology group here is reduced.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SparseMatrix};
use crate::ring::{Coefficients, Field, PrimeField, Rationals, Ring};

/// Sorted vertex list of a simplex.
pub type Simplex = Box<[u32]>;

#[derive(Debug, Default)]
struct FaceLevel {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

/// A finite chamber complex with typed vertices.
#[derive(Debug)]
pub struct SimplicialComplex {
    vertex_types: Vec<u8>,
    chambers: Vec<Simplex>,
    chamber_index: HashMap<Simplex, usize>,
    /// Face levels `0..top`, built on first use.
    faces: OnceLock<Vec<FaceLevel>>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            vertex_types: self.vertex_types.clone(),
            chambers: self.chambers.clone(),
            chamber_index: self.chamber_index.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl SimplicialComplex {
    /// Builds the complex generated by `chambers`, preserving their order.
    pub fn from_chambers(vertex_types: Vec<u8>, chambers: Vec<Vec<u32>>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(chambers.len());
        let mut width = None;
        for ch in chambers {
            if ch.iter().any(|&v| v as usize >= vertex_types.len()) {
                return Err(Error::Unsupported(format!("chamber {ch:?} names an unknown vertex")));
            }
            let s = sort_by_type(&vertex_types, &ch);
            if s.windows(2).any(|w| vertex_types[w[0] as usize] == vertex_types[w[1] as usize]) {
                return Err(Error::Unsupported(format!("chamber {ch:?} repeats a vertex type")));
            }
            if *width.get_or_insert(s.len()) != s.len() {
                return Err(Error::Unsupported("chambers of different dimensions".into()));
            }
            sorted.push(s);
        }
        let chamber_index: HashMap<Simplex, usize> = sorted.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
        if chamber_index.len() != sorted.len() {
            return Err(Error::Unsupported("duplicate chamber".into()));
        }
        Ok(SimplicialComplex { vertex_types, chambers: sorted, chamber_index, faces: OnceLock::new() })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_types.len()
    }

    pub fn vertex_type(&self, v: u32) -> u8 {
        self.vertex_types[v as usize]
    }

    pub fn vertex_types(&self) -> &[u8] {
        &self.vertex_types
    }

    /// Dimension of the chambers.
    pub fn dim(&self) -> usize {
        self.chambers.first().map_or(0, |c| c.len() - 1)
    }

    pub fn chambers(&self) -> &[Simplex] {
        &self.chambers
    }

    pub fn num_chambers(&self) -> usize {
        self.chambers.len()
    }

    pub fn chamber_id(&self, s: &[u32]) -> Option<usize> {
        self.chamber_index.get(s).copied()
    }

    fn levels(&self) -> &[FaceLevel] {
        self.faces.get_or_init(|| {
            let top = self.dim();
            let mut sets: Vec<HashSet<Simplex>> = vec![HashSet::new(); top];
            for ch in &self.chambers {
                let k = ch.len();
                // all proper nonempty subsets
                for mask in 1u32..(1 << k) - 1 {
                    let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ch[i]).collect();
                    sets[face.len() - 1].insert(face);
                }
            }
            sets.into_iter()
                .map(|set| {
                    let mut simplices: Vec<Simplex> = set.into_iter().collect();
                    simplices.sort();
                    let index = simplices.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
                    FaceLevel { simplices, index }
                })
                .collect()
        })
    }

    /// Number of simplices of dimension `d` (`d = -1` counts the empty simplex).
    pub fn num_simplices(&self, d: isize) -> usize {
        let top = self.dim() as isize;
        match d {
            -1 => 1,
            d if d == top => self.chambers.len(),
            d if d >= 0 && d < top => self.levels()[d as usize].simplices.len(),
            _ => 0,
        }
    }

    pub fn simplex(&self, d: usize, id: usize) -> &[u32] {
        if d == self.dim() {
            &self.chambers[id]
        } else {
            &self.levels()[d].simplices[id]
        }
    }

    pub fn simplex_id(&self, s: &[u32]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        if d == self.dim() {
            self.chamber_id(s)
        } else if d < self.dim() {
            self.levels()[d].index.get(s).copied()
        } else {
            None
        }
    }

    /// Matrix of `∂_d : C_d → C_{d-1}`; `∂_0` is the augmentation.
    pub fn boundary_matrix(&self, d: usize) -> SparseMatrix {
        let ncols = self.num_simplices(d as isize);
        if d == 0 {
            return SparseMatrix::from_triplets(1, ncols, (0..ncols).map(|c| (0, c, 1)));
        }
        let nrows = self.num_simplices(d as isize - 1);
        let mut triplets = Vec::with_capacity(ncols * (d + 1));
        let mut face = Vec::with_capacity(d);
        for c in 0..ncols {
            let s = self.simplex(d, c);
            for i in 0..s.len() {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v));
                let r = self.simplex_id(&face).expect("face closure is complete");
                triplets.push((r, c, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        SparseMatrix::from_triplets(nrows, ncols, triplets)
    }

    /// `χ̃ = Σ_{d ≥ -1} (-1)^d · #simplices_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        (-1..=self.dim() as isize)
            .map(|d| {
                let n = self.num_simplices(d) as i64;
                if d.rem_euclid(2) == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Applies a vertex map to a chain, re-sorting each image simplex and
    /// tracking the sign of the sorting permutation.
    pub fn map_chain<R: Ring>(&self, chain: &Chain<R>, vertex_map: impl Fn(u32) -> u32) -> Result<Chain<R>> {
        self.map_chain_into(self, chain, vertex_map)
    }

    /// Like [`map_chain`](Self::map_chain), with images landing in `target`.
    pub fn map_chain_into<R: Ring>(
        &self,
        target: &SimplicialComplex,
        chain: &Chain<R>,
        vertex_map: impl Fn(u32) -> u32,
    ) -> Result<Chain<R>> {
        if chain.degree < 0 {
            return Ok(chain.clone());
        }
        let d = chain.degree as usize;
        if d > self.dim() || chain.terms.keys().next_back().is_some_and(|&k| k >= self.num_simplices(d as isize)) {
            return Err(Error::Unsupported("chain does not live on this complex".into()));
        }
        let mut out = Chain::zero(chain.ring.clone(), chain.degree);
        let mut img: Vec<u32> = Vec::with_capacity(d + 1);
        for (&id, coeff) in &chain.terms {
            img.clear();
            img.extend(self.simplex(d, id).iter().map(|&v| vertex_map(v)));
            let sign = sort_with_sign(&target.vertex_types, &mut img);
            let image = target
                .simplex_id(&img)
                .ok_or_else(|| Error::Unsupported(format!("image simplex {img:?} is not in the complex")))?;
            let c = if sign < 0 { chain.ring.neg(coeff) } else { coeff.clone() };
            out.add_term(image, &c);
        }
        Ok(out)
    }

    pub fn boundary<R: Ring>(&self, chain: &Chain<R>) -> Result<Chain<R>> {
        if chain.degree < 0 {
            return Err(Error::Unsupported("the augmentation has no boundary".into()));
        }
        let d = chain.degree as usize;
        let mut out = Chain::zero(chain.ring.clone(), chain.degree - 1);
        let mut face = Vec::with_capacity(d);
        for (&id, coeff) in &chain.terms {
            if d == 0 {
                out.add_term(0, coeff);
                continue;
            }
            let s = self.simplex(d, id);
            for i in 0..s.len() {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v));
                let r = self.simplex_id(&face).expect("face closure is complete");
                let c = if i % 2 == 0 { coeff.clone() } else { chain.ring.neg(coeff) };
                out.add_term(r, &c);
            }
        }
        Ok(out)
    }

    /// Number of chambers containing each codimension-one face.
    pub fn panel_degrees(&self) -> Vec<usize> {
        let top = self.dim();
        if top == 0 {
            return vec![self.num_chambers()];
        }
        let mut deg = vec![0usize; self.num_simplices(top as isize - 1)];
        let m = self.boundary_matrix(top);
        for r in 0..m.nrows() {
            deg[r] = m.row(r).len();
        }
        deg
    }
}

fn sort_by_type(types: &[u8], vs: &[u32]) -> Simplex {
    let mut s = vs.to_vec();
    s.sort_by_key(|&v| (types[v as usize], v));
    s.into_boxed_slice()
}

/// Insertion sort by `(type, id)`; returns the permutation sign.
fn sort_with_sign(types: &[u8], vs: &mut [u32]) -> i32 {
    let key = |v: u32| (types[v as usize], v);
    let mut sign = 1;
    for i in 1..vs.len() {
        let mut j = i;
        while j > 0 && key(vs[j - 1]) > key(vs[j]) {
            vs.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// A homogeneous chain: a finite linear combination of oriented simplices
/// of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<R: Ring> {
    ring: R,
    degree: isize,
    terms: BTreeMap<usize, R::Elem>,
}

impl<R: Ring> Chain<R> {
    pub fn zero(ring: R, degree: isize) -> Self {
        Chain { ring, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(ring: R, degree: isize, terms: impl IntoIterator<Item = (usize, R::Elem)>) -> Self {
        let mut c = Chain::zero(ring, degree);
        for (id, v) in terms {
            c.add_term(id, &v);
        }
        c
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<usize, R::Elem> {
        &self.terms
    }

    pub fn coefficient(&self, id: usize) -> R::Elem {
        self.terms.get(&id).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, id: usize, v: &R::Elem) {
        let cur = self.terms.remove(&id).unwrap_or_else(|| self.ring.zero());
        let next = self.ring.add(&cur, v);
        if !self.ring.is_zero(&next) {
            self.terms.insert(id, next);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch {
                what: "coefficient rings",
                left: self.ring.name(),
                right: other.ring.name(),
            });
        }
        if self.degree != other.degree {
            return Err(Error::Mismatch {
                what: "chain degrees",
                left: self.degree.to_string(),
                right: other.degree.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&id, v) in &other.terms {
            out.add_term(id, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Chain::zero(self.ring.clone(), self.degree);
        for (&id, v) in &self.terms {
            out.add_term(id, &self.ring.mul(c, v));
        }
        out
    }

    /// Dense coefficient vector of length `n`.
    pub fn to_dense(&self, n: usize) -> Vec<R::Elem> {
        let mut v = vec![self.ring.zero(); n];
        for (&id, x) in &self.terms {
            v[id] = x.clone();
        }
        v
    }

    pub fn to_sparse(&self) -> Vec<(usize, R::Elem)> {
        self.terms.iter().map(|(&k, v)| (k, v.clone())).collect()
    }
}

impl Chain<crate::ring::Integers> {
    /// Reduces integer coefficients into another ring.
    pub fn change_ring<S: Ring>(&self, ring: &S) -> Chain<S> {
        Chain::from_terms(ring.clone(), self.degree, self.terms.iter().map(|(&k, &v)| (k, ring.from_i64(v))))
    }
}

/// Reduced homology in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: isize,
    /// Free rank over `ℤ`, or dimension over a field.
    pub rank: usize,
    /// Invariant factors greater than one (integral coefficients only).
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Reduced homology in every degree from `-1` to the top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub coefficients: String,
    pub reduced: bool,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyProfile {
    pub fn rank(&self, degree: isize) -> usize {
        self.degrees.iter().find(|h| h.degree == degree).map_or(0, |h| h.rank)
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|h| !h.torsion.is_empty())
    }

    /// `Σ (-1)^d rank_d`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|h| if h.degree.rem_euclid(2) == 0 { h.rank as i64 } else { -(h.rank as i64) }).sum()
    }

    /// Betti numbers from degree `0` up, the usual display form.
    pub fn betti_from_zero(&self) -> Vec<usize> {
        self.degrees.iter().filter(|h| h.degree >= 0).map(|h| h.rank).collect()
    }

    /// True when only the top degree is nonzero and nothing has torsion.
    pub fn is_concentrated_in(&self, degree: isize) -> bool {
        !self.has_torsion() && self.degrees.iter().all(|h| h.degree == degree || h.rank == 0)
    }
}

/// Reduced Betti numbers over a field.
pub fn betti<F: Field>(complex: &SimplicialComplex, field: &F) -> HomologyProfile {
    let top = complex.dim();
    let ranks: Vec<usize> = (0..=top).map(|d| linalg::rank_over(&complex.boundary_matrix(d), field)).collect();
    profile_from_ranks(complex, field.name(), &ranks, |_| Vec::new())
}

/// Reduced Betti numbers with runtime-selected coefficients; `ℤ` is rejected.
pub fn betti_with(complex: &SimplicialComplex, coefficients: Coefficients) -> Result<HomologyProfile> {
    match coefficients {
        Coefficients::Rationals => Ok(betti(complex, &Rationals)),
        Coefficients::Prime(p) => Ok(betti(complex, &PrimeField::new(p)?)),
        Coefficients::Integers => {
            Err(Error::Unsupported("betti needs field coefficients; use integral_homology for Z".into()))
        }
    }
}

/// Reduced integral homology via Smith normal form.
pub fn integral_homology(complex: &SimplicialComplex) -> HomologyProfile {
    let top = complex.dim();
    let snf: Vec<linalg::SmithForm> =
        (0..=top).map(|d| linalg::smith_normal_form(&complex.boundary_matrix(d))).collect();
    let ranks: Vec<usize> = snf.iter().map(|s| s.rank).collect();
    // Torsion in degree d comes from the image of ∂_{d+1}.
    profile_from_ranks(complex, "Z".into(), &ranks, |d| {
        let k = (d + 1) as usize;
        snf.get(k).map(|s| s.torsion()).unwrap_or_default()
    })
}

/// `ranks[d]` is the rank of `∂_d` for `d = 0..=top`.
fn profile_from_ranks(
    complex: &SimplicialComplex,
    coefficients: String,
    ranks: &[usize],
    torsion: impl Fn(isize) -> Vec<BigInt>,
) -> HomologyProfile {
    let top = complex.dim() as isize;
    let rank_of = |d: isize| -> usize {
        if d >= 0 && d <= top {
            ranks[d as usize]
        } else {
            0
        }
    };
    let degrees = (-1..=top)
        .map(|d| DegreeHomology {
            degree: d,
            rank: complex.num_simplices(d) - rank_of(d) - rank_of(d + 1),
            torsion: torsion(d),
        })
        .collect();
    HomologyProfile { coefficients, reduced: true, degrees }
}

/// Basis of the `degree`-cycles over a field. In the top degree this is a
/// basis of the top reduced homology.
pub fn kernel_basis<F: Field>(complex: &SimplicialComplex, degree: usize, field: &F) -> Vec<Chain<F>> {
    let m = complex.boundary_matrix(degree);
    linalg::kernel_basis(&m, field)
        .into_iter()
        .map(|v| {
            Chain::from_terms(
                field.clone(),
                degree as isize,
                v.into_iter().enumerate().filter(|(_, x)| !field.is_zero(x)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;

    fn hexagon() -> SimplicialComplex {
        // Vertices 0,2,4 type 0; 1,3,5 type 1.
        let types = vec![0, 1, 0, 1, 0, 1];
        let chambers = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        SimplicialComplex::from_chambers(types, chambers).unwrap()
    }

    /// Incidence graph of the Fano plane: points 0..7, lines 7..14.
    fn fano() -> SimplicialComplex {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        let mut types = vec![0u8; 7];
        types.extend([1u8; 7]);
        let chambers =
            lines.iter().enumerate().flat_map(|(l, pts)| pts.iter().map(move |&p| vec![p, 7 + l as u32])).collect();
        SimplicialComplex::from_chambers(types, chambers).unwrap()
    }

    #[test]
    fn edge_boundary() {
        let c = SimplicialComplex::from_chambers(vec![0, 1], vec![vec![1, 0]]).unwrap();
        let e = Chain::from_terms(Integers, 1, [(0, 1)]);
        let b = c.boundary(&e).unwrap();
        // faces ordered [u], [v] with u the type-0 vertex; ∂[u,v] = v - u
        let u = c.simplex_id(&[0]).unwrap();
        let v = c.simplex_id(&[1]).unwrap();
        assert_eq!(b.coefficient(v), 1);
        assert_eq!(b.coefficient(u), -1);
    }

    #[test]
    fn single_simplex_is_acyclic() {
        let c = SimplicialComplex::from_chambers(vec![0, 1, 2], vec![vec![0, 1, 2]]).unwrap();
        let h = integral_homology(&c);
        assert!(h.degrees.iter().all(|d| d.rank == 0 && d.torsion.is_empty()));
        assert!(betti(&c, &Rationals).degrees.iter().all(|d| d.rank == 0));
        assert!(kernel_basis(&c, 2, &Rationals).is_empty());
    }

    #[test]
    fn hexagon_homology() {
        let c = hexagon();
        let b = betti(&c, &Rationals);
        assert_eq!(b.betti_from_zero(), vec![0, 1]);
        let h = integral_homology(&c);
        assert_eq!(h.rank(1), 1);
        assert!(!h.has_torsion());
        let k = kernel_basis(&c, 1, &Rationals);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].len(), 6);
        assert!(c.boundary(&k[0]).unwrap().is_zero());
    }

    #[test]
    fn fano_incidence_graph() {
        let c = fano();
        assert_eq!(c.num_simplices(0), 14);
        assert_eq!(c.num_simplices(1), 21);
        let b = betti(&c, &Rationals);
        assert_eq!(b.betti_from_zero(), vec![0, 8]);
        assert_eq!(c.reduced_euler_characteristic(), -8);
        assert_eq!(b.euler_characteristic(), -8);
        let h = integral_homology(&c);
        assert_eq!(h.rank(1), 8);
        assert!(h.is_concentrated_in(1));
        assert_eq!(kernel_basis(&c, 1, &Rationals).len(), 8);
        assert!(c.panel_degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn betti_rejects_integers() {
        assert!(betti_with(&hexagon(), Coefficients::Integers).is_err());
        assert!(betti_with(&hexagon(), Coefficients::Prime(3)).is_ok());
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let f3 = PrimeField::new(3).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let a = Chain::from_terms(f3, 1, [(0, 1)]);
        let b = Chain::from_terms(f5, 1, [(0, 1)]);
        assert!(a.add(&b).is_err());
        let c = Chain::from_terms(f3, 0, [(0, 1)]);
        assert!(a.add(&c).is_err());
    }

    #[test]
    fn boundary_squared_is_zero_on_tetrahedron_boundary() {
        // boundary of a 3-simplex with vertex types 0..3
        let types = vec![0, 1, 2, 3];
        let ch = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let c = SimplicialComplex::from_chambers(types, ch).unwrap();
        let d2 = c.boundary_matrix(2);
        let d1 = c.boundary_matrix(1);
        assert!(d1.mul(&d2).is_zero());
        assert!(c.boundary_matrix(0).mul(&d1).is_zero());
        let h = integral_homology(&c);
        assert_eq!(h.rank(2), 1);
        assert!(h.is_concentrated_in(2));
    }

    #[test]
    fn invalid_complexes() {
        assert!(SimplicialComplex::from_chambers(vec![0, 0], vec![vec![0, 1]]).is_err());
        assert!(SimplicialComplex::from_chambers(vec![0, 1, 2], vec![vec![0, 1], vec![0, 1, 2]]).is_err());
        assert!(SimplicialComplex::from_chambers(vec![0, 1], vec![vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn map_chain_tracks_orientation() {
        // untyped-looking swap: vertices 0 (type 1) and 1 (type 0)
        let c = SimplicialComplex::from_chambers(vec![1, 0, 1, 0], vec![vec![0, 1], vec![2, 3]]).unwrap();
        let e = Chain::from_terms(Integers, 1, [(0, 1)]);
        // type-preserving swap of the two edges
        let m = c.map_chain(&e, |v| (v + 2) % 4).unwrap();
        assert_eq!(m.coefficient(1), 1);
    }
}
