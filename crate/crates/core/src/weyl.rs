//! Finite Weyl groups acting on their root systems.
//!
//! An element is stored as the permutation it induces on the canonical root
//! list of a [`RootSystem`]. The action on roots is faithful, so equality of
//! permutations is equality in `W`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::rootsys::{CartanType, Family, RootSystem};

/// Default cap on `|W|` for full enumeration.
pub const DEFAULT_WEYL_CAP: u128 = 10_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    kind: CartanType,
    perm: Box<[u16]>,
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement({}, {:?})", self.kind, self.perm)
    }
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        WeylElement { kind: rs.kind(), perm: (0..rs.num_roots() as u16).collect() }
    }

    /// The simple reflection `s_i`.
    pub fn generator(rs: &RootSystem, i: usize) -> Result<Self> {
        if i >= rs.rank() {
            return Err(Error::IndexOutOfRange { index: i, rank: rs.rank() });
        }
        Ok(WeylElement { kind: rs.kind(), perm: rs.reflection_table(i).iter().map(|&k| k as u16).collect() })
    }

    pub(crate) fn from_perm(kind: CartanType, perm: Box<[u16]>) -> Self {
        WeylElement { kind, perm }
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn perm(&self) -> &[u16] {
        &self.perm
    }

    /// Image of the root with index `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.perm[k] as usize
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::Mismatch {
                what: "Weyl groups",
                left: self.kind.to_string(),
                right: other.kind.to_string(),
            });
        }
        Ok(())
    }

    /// `self · other`, acting as `self(other(β))`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.compose(other))
    }

    pub(crate) fn compose(&self, other: &Self) -> Self {
        WeylElement { kind: self.kind, perm: other.perm.iter().map(|&k| self.perm[k as usize]).collect() }
    }

    pub fn invert(&self) -> Self {
        let mut inv = vec![0u16; self.perm.len()].into_boxed_slice();
        for (k, &img) in self.perm.iter().enumerate() {
            inv[img as usize] = k as u16;
        }
        WeylElement { kind: self.kind, perm: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &v)| k == v as usize)
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self) -> usize {
        let npos = self.perm.len() / 2;
        self.perm[..npos].iter().filter(|&&img| img as usize >= npos).count()
    }

    /// Smallest `k ≥ 1` with `self^k = 1`.
    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc);
            k += 1;
        }
        k
    }

    /// `s_i · self`.
    pub fn left_mul_generator(&self, rs: &RootSystem, i: usize) -> Self {
        let table = rs.reflection_table(i);
        WeylElement { kind: self.kind, perm: self.perm.iter().map(|&k| table[k as usize] as u16).collect() }
    }

    /// `self · s_i`.
    pub fn right_mul_generator(&self, rs: &RootSystem, i: usize) -> Self {
        let table = rs.reflection_table(i);
        WeylElement { kind: self.kind, perm: table.iter().map(|&k| self.perm[k as usize]).collect() }
    }

    /// Reduced word, as 0-based generator indices, with `w = s_{w[0]} s_{w[1]} …`.
    ///
    /// Greedy left descents, smallest index first.
    pub fn reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        let simple: Vec<usize> = (0..rs.rank()).map(|i| rs.simple_index(i)).collect();
        while !w.is_identity() {
            // ℓ(s_i w) < ℓ(w) iff w⁻¹(α_i) < 0.
            let inv = w.invert();
            let i = (0..rs.rank())
                .find(|&i| !rs.is_positive(inv.apply(simple[i])))
                .expect("non-identity element has a left descent");
            word.push(i);
            w = w.left_mul_generator(rs, i);
        }
        word
    }

    /// Multiplies out a word of generator indices.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let mut w = WeylElement::identity(rs);
        for &i in word {
            if i >= rs.rank() {
                return Err(Error::IndexOutOfRange { index: i, rank: rs.rank() });
            }
            w = w.right_mul_generator(rs, i);
        }
        Ok(w)
    }
}

/// Options for [`WeylGroup::enumerate`].
#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub cap: u128,
    /// `E_7` has 2 903 040 elements; it is only enumerated when asked for.
    pub allow_e7: bool,
    pub cache: Option<Cache>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { cap: DEFAULT_WEYL_CAP, allow_e7: false, cache: None }
    }
}

/// The Weyl group of a root system together with its full element list.
///
/// Elements are in canonical order: by length, then by root permutation.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rs: RootSystem,
    elements: Vec<WeylElement>,
    lengths: Vec<u32>,
    index: HashMap<Box<[u16]>, u32>,
    /// `left[e][i]` = index of `s_i · e`; `right[e][i]` = index of `e · s_i`.
    left: Vec<Box<[u32]>>,
    right: Vec<Box<[u32]>>,
    from_cache: bool,
}

impl WeylGroup {
    pub fn enumerate(rs: &RootSystem, opts: &EnumerateOptions) -> Result<Self> {
        let kind = rs.kind();
        let order = kind.weyl_order();
        if kind.family == Family::E && kind.rank == 7 && !opts.allow_e7 {
            return Err(Error::CapExceeded {
                what: format!("W({kind}) (E7 requires the explicit large-enumeration flag)"),
                required: order,
                cap: opts.cap.min(order - 1),
            });
        }
        if order > opts.cap {
            return Err(Error::CapExceeded { what: format!("W({kind})"), required: order, cap: opts.cap });
        }

        let key = kind.to_string();
        if let Some(cache) = &opts.cache {
            if let Some(records) = cache.load("weyl", &key)? {
                if let Some(group) = Self::from_records(rs, &records) {
                    return Ok(group);
                }
            }
        }

        let mut seen: HashMap<Box<[u16]>, ()> = HashMap::new();
        let id = WeylElement::identity(rs);
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id.perm.clone(), ());
        let mut elements = Vec::new();
        while let Some(w) = queue.pop_front() {
            for i in 0..rs.rank() {
                let next = w.right_mul_generator(rs, i);
                if !seen.contains_key(&next.perm) {
                    seen.insert(next.perm.clone(), ());
                    queue.push_back(next);
                }
            }
            elements.push(w);
            if elements.len() as u128 > opts.cap {
                return Err(Error::CapExceeded { what: format!("W({kind})"), required: order, cap: opts.cap });
            }
        }
        let group = Self::assemble(rs, elements);
        if let Some(cache) = &opts.cache {
            let records: Vec<Vec<i64>> = group
                .elements
                .iter()
                .zip(&group.lengths)
                .map(|(w, &l)| {
                    let mut r: Vec<i64> = w.perm.iter().map(|&v| v as i64).collect();
                    r.push(l as i64);
                    r
                })
                .collect();
            cache.store("weyl", &key, records.iter())?;
        }
        Ok(group)
    }

    /// Rebuilds a group from cache records, rejecting anything inconsistent.
    fn from_records(rs: &RootSystem, records: &[Vec<i64>]) -> Option<Self> {
        let n = rs.num_roots();
        if records.len() as u128 != rs.kind().weyl_order() {
            return None;
        }
        let mut elements = Vec::with_capacity(records.len());
        for rec in records {
            if rec.len() != n + 1 {
                return None;
            }
            let perm: Box<[u16]> =
                rec[..n].iter().map(|&v| u16::try_from(v).ok().filter(|&v| (v as usize) < n)).collect::<Option<_>>()?;
            let w = WeylElement::from_perm(rs.kind(), perm);
            if w.length() as i64 != rec[n] {
                return None;
            }
            elements.push(w);
        }
        let mut group = Self::assemble(rs, elements);
        if group.index.len() != records.len() {
            return None;
        }
        group.from_cache = true;
        Some(group)
    }

    fn assemble(rs: &RootSystem, mut elements: Vec<WeylElement>) -> Self {
        elements.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.perm.cmp(&b.perm)));
        let lengths: Vec<u32> = elements.iter().map(|w| w.length() as u32).collect();
        let index: HashMap<Box<[u16]>, u32> =
            elements.iter().enumerate().map(|(k, w)| (w.perm.clone(), k as u32)).collect();
        let rank = rs.rank();
        let lookup = |w: &WeylElement| index[&w.perm];
        let left = elements.iter().map(|w| (0..rank).map(|i| lookup(&w.left_mul_generator(rs, i))).collect()).collect();
        let right =
            elements.iter().map(|w| (0..rank).map(|i| lookup(&w.right_mul_generator(rs, i))).collect()).collect();
        WeylGroup { rs: rs.clone(), elements, lengths, index, left, right, from_cache: false }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, e: usize) -> &WeylElement {
        &self.elements[e]
    }

    pub fn length_of(&self, e: usize) -> usize {
        self.lengths[e] as usize
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        if w.kind != self.rs.kind() {
            return None;
        }
        self.index.get(&w.perm).map(|&k| k as usize)
    }

    /// Index of `s_i · e`.
    pub fn left_generator(&self, e: usize, i: usize) -> usize {
        self.left[e][i] as usize
    }

    /// Index of `e · s_i`.
    pub fn right_generator(&self, e: usize, i: usize) -> usize {
        self.right[e][i] as usize
    }

    /// Index of `a · b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let w = self.elements[a].compose(&self.elements[b]);
        self.index[&w.perm] as usize
    }

    pub fn was_loaded_from_cache(&self) -> bool {
        self.from_cache
    }

    /// Coefficients `c_k = #{w : ℓ(w) = k}`.
    pub fn poincare_polynomial(&self) -> Vec<u64> {
        let mut coeffs = vec![0u64; self.rs.num_positive() + 1];
        for &l in &self.lengths {
            coeffs[l as usize] += 1;
        }
        coeffs
    }

    /// Index of the longest element.
    pub fn longest(&self) -> usize {
        self.elements.len() - 1
    }

    /// Minimal-length coset representatives of `W / W_J`.
    pub fn parabolic_cosets(&self, subset: &[usize]) -> Result<CosetTable> {
        let rank = self.rs.rank();
        let mut j: Vec<usize> = subset.to_vec();
        j.sort_unstable();
        j.dedup();
        if let Some(&bad) = j.iter().find(|&&i| i >= rank) {
            return Err(Error::IndexOutOfRange { index: bad, rank });
        }
        if j.len() == rank {
            return Err(Error::NotProper(rank));
        }
        let simple: Vec<usize> = j.iter().map(|&i| self.rs.simple_index(i)).collect();
        let is_min = |e: usize| simple.iter().all(|&a| self.rs.is_positive(self.elements[e].apply(a)));
        // Elements are sorted by length, so reps are discovered in canonical order.
        let mut coset_of = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for e in 0..self.order() {
            if is_min(e) {
                coset_of[e] = reps.len() as u32;
                reps.push(e);
            }
        }
        for e in 0..self.order() {
            if coset_of[e] != u32::MAX {
                continue;
            }
            // Strip right descents in J until the minimal representative is reached.
            let mut cur = e;
            loop {
                let desc = j.iter().zip(&simple).find(|&(_, &a)| !self.rs.is_positive(self.elements[cur].apply(a)));
                match desc {
                    Some((&i, _)) => cur = self.right_generator(cur, i),
                    None => break,
                }
            }
            coset_of[e] = coset_of[cur];
        }
        Ok(CosetTable { subset: j, reps, coset_of })
    }
}

/// Cosets `w W_J` of a standard parabolic subgroup.
#[derive(Debug, Clone)]
pub struct CosetTable {
    subset: Vec<usize>,
    reps: Vec<usize>,
    coset_of: Vec<u32>,
}

impl CosetTable {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// Element indices of the minimal-length representatives.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Coset id of the element with index `e`.
    pub fn coset_of(&self, e: usize) -> usize {
        self.coset_of[e] as usize
    }
}
