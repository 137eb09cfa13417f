//! The spherical building of `SL_d(F_p)` or `Sp_{2n}(F_p)` as a flag complex.
//!
//! Vertices are proper nonzero subspaces of `F_p^d` (totally isotropic ones
//! of dimension at most `n` for `Sp_{2n}`), and a vertex of dimension `k` has
//! type `k-1`: its stabilizer is the maximal standard parabolic subgroup that
//! omits the simple root `α_{k-1}`. Chambers are complete flags, and the
//! fundamental chamber is the coordinate flag `⟨e_0⟩ ⊂ ⟨e_0,e_1⟩ ⊂ …`,
//! which the upper-triangular Borel subgroup stabilizes.
//!
//! The standard apartment is the set of chambers `w̃C`, where `w̃` is the
//! product of the lifts `w_{α_i}` along the canonical reduced word of `w`.
//!
//! The finite field stands in for the number field of the motivating
//! theorem, so what is checked here is the mechanism of its proof
//! (generation by apartment classes plus inversion of each class), not the
//! statement about arithmetic groups itself.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, RngExt};
use serde::Serialize;

use crate::cache::Cache;
use crate::chevalley_fq::{
    form_matrix, ChevalleyGroup, GroupElement, GroupEnumOptions, GroupEnumeration, GroupKind, GroupSpec,
};
use crate::coxcomplex::CoxeterComplex;
use crate::error::{Error, Result};
use crate::homology::{self, Chain, HomologyProfile, SimplicialComplex};
use crate::linalg::EchelonBasis;
use crate::ring::{Field, Integers, Ring};
use crate::weyl::{EnumerateOptions, WeylGroup};

pub const DEFAULT_CHAMBER_CAP: u128 = 2_000_000;

/// A subspace of `F_p^d` in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    dim: usize,
    /// `dim × d` RREF basis, row-major.
    rows: Box<[u8]>,
}

impl Subspace {
    /// The span of `vectors`; zero vectors and dependencies are dropped.
    pub fn span(vectors: &[Vec<u8>], p: u32) -> Self {
        let rows = rref(vectors.to_vec(), p);
        Subspace { dim: rows.len(), rows: rows.into_iter().flatten().collect::<Vec<u8>>().into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Vec<&[u8]> {
        if self.dim == 0 {
            return Vec::new();
        }
        self.rows.chunks(self.rows.len() / self.dim).collect()
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis().iter().map(|r| r.iter().position(|&v| v != 0).expect("RREF rows are nonzero")).collect()
    }

    pub fn contains_vector(&self, v: &[u8], p: u32) -> bool {
        let mut v: Vec<u32> = v.iter().map(|&x| x as u32).collect();
        for (row, piv) in self.basis().iter().zip(self.pivots()) {
            let f = v[piv];
            if f != 0 {
                for (x, &r) in v.iter_mut().zip(row.iter()) {
                    *x = (*x + (p - f) * r as u32) % p;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &Subspace, p: u32) -> bool {
        other.dim <= self.dim && other.basis().iter().all(|r| self.contains_vector(r, p))
    }

    pub fn image(&self, g: &GroupElement) -> Subspace {
        let p = g.spec().p;
        let imgs: Vec<Vec<u8>> = self.basis().iter().map(|r| g.apply(r)).collect();
        Subspace::span(&imgs, p)
    }

    /// `⟨u, v⟩ = uᵀ J v = 0` for all basis pairs.
    pub fn is_isotropic(&self, spec: GroupSpec) -> bool {
        let j = form_matrix(spec);
        let p = spec.p;
        let basis = self.basis();
        basis.iter().all(|u| {
            basis.iter().all(|v| {
                let jv = j.apply(v);
                u.iter().zip(&jv).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % p == 0
            })
        })
    }
}

/// Row-reduces to RREF over `F_p`, dropping zero rows.
fn rref(mut rows: Vec<Vec<u8>>, p: u32) -> Vec<Vec<u8>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inverse_mod(rows[r][c] as u32, p);
        for x in rows[r].iter_mut() {
            *x = (*x as u32 * inv % p) as u8;
        }
        for k in 0..rows.len() {
            let f = rows[k][c] as u32;
            if k == r || f == 0 {
                continue;
            }
            for j in 0..ncols {
                rows[k][j] = ((rows[k][j] as u32 + (p - f) * rows[r][j] as u32) % p) as u8;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

fn inverse_mod(a: u32, p: u32) -> u32 {
    let (mut acc, mut base, mut e) = (1u64, a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Every `k`-dimensional subspace of `F_p^d`, in RREF order.
fn subspaces_of_dim(d: usize, k: usize, p: u32) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    pivot_sets(d, k, 0, &mut pivots, &mut |piv| {
        // free slots: row r, column c > piv[r], c not a pivot
        let free: Vec<(usize, usize)> =
            (0..k).flat_map(|r| (piv[r] + 1..d).filter(|c| !piv.contains(c)).map(move |c| (r, c))).collect();
        let total = (p as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![0u8; k * d];
            for (r, &c) in piv.iter().enumerate() {
                rows[r * d + c] = 1;
            }
            for &(r, c) in &free {
                rows[r * d + c] = (code % p as u64) as u8;
                code /= p as u64;
            }
            out.push(Subspace { dim: k, rows: rows.into() });
        }
    });
    out.sort();
    out
}

fn pivot_sets(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for c in start..d {
        cur.push(c);
        pivot_sets(d, k, c + 1, cur, f);
        cur.pop();
    }
}

#[derive(Debug, Clone)]
pub struct BuildingOptions {
    pub chamber_cap: u128,
    pub cache: Option<Cache>,
}

impl Default for BuildingOptions {
    fn default() -> Self {
        BuildingOptions { chamber_cap: DEFAULT_CHAMBER_CAP, cache: None }
    }
}

/// The standard apartment with its isomorphism `F` to the Coxeter complex.
#[derive(Debug, Clone)]
pub struct Apartment {
    /// Building chamber id of `w̃C`, indexed like the Weyl group elements.
    chambers: Vec<usize>,
    lifts: Vec<GroupElement>,
    /// `F` on vertices: building vertex → Coxeter complex vertex.
    to_coxeter: HashMap<u32, u32>,
    /// `F⁻¹`, indexed by Coxeter complex vertex.
    from_coxeter: Vec<u32>,
    /// `F` is well defined and bijective on vertices.
    bijective: bool,
}

impl Apartment {
    pub fn chambers(&self) -> &[usize] {
        &self.chambers
    }

    /// `w̃` for each Weyl group element.
    pub fn lifts(&self) -> &[GroupElement] {
        &self.lifts
    }

    pub fn to_coxeter(&self, v: u32) -> Option<u32> {
        self.to_coxeter.get(&v).copied()
    }

    pub fn from_coxeter(&self, v: u32) -> u32 {
        self.from_coxeter[v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.from_coxeter.len()
    }
}

#[derive(Debug, Clone)]
pub struct TitsBuilding {
    group: ChevalleyGroup,
    coxeter: CoxeterComplex,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    complex: SimplicialComplex,
    fundamental: usize,
    apartment: Apartment,
}

impl TitsBuilding {
    pub fn build(spec: GroupSpec, opts: &BuildingOptions) -> Result<Self> {
        let group = ChevalleyGroup::new(spec);
        let weyl = WeylGroup::enumerate(
            group.root_system(),
            &EnumerateOptions { cache: opts.cache.clone(), ..Default::default() },
        )?;
        let predicted = poincare_at(&weyl.poincare_polynomial(), spec.p as u128);
        if predicted > opts.chamber_cap {
            return Err(Error::CapExceeded {
                what: format!("chambers of the building of {spec}"),
                required: predicted,
                cap: opts.chamber_cap,
            });
        }
        let coxeter = CoxeterComplex::from_group(weyl)?;
        let rank = spec.rank();
        let d = spec.dim;

        let levels: Vec<Vec<Subspace>> = (1..=rank)
            .map(|k| {
                let all = subspaces_of_dim(d, k, spec.p);
                match spec.kind {
                    GroupKind::SpecialLinear => all,
                    GroupKind::Symplectic => all.into_iter().filter(|s| s.is_isotropic(spec)).collect(),
                }
            })
            .collect();
        let mut subspaces = Vec::new();
        let mut vertex_types = Vec::new();
        let mut offsets = Vec::new();
        for (t, level) in levels.iter().enumerate() {
            offsets.push(subspaces.len());
            vertex_types.extend(std::iter::repeat_n(t as u8, level.len()));
            subspaces.extend(level.iter().cloned());
        }
        let index: HashMap<Subspace, u32> = subspaces.iter().cloned().enumerate().map(|(k, s)| (s, k as u32)).collect();

        // children[t][a] = ids at level t+1 containing vertex a of level t
        let children: Vec<Vec<Vec<u32>>> = (0..rank.saturating_sub(1))
            .map(|t| {
                levels[t]
                    .iter()
                    .map(|small| {
                        levels[t + 1]
                            .iter()
                            .enumerate()
                            .filter(|(_, big)| big.contains(small, spec.p))
                            .map(|(b, _)| (offsets[t + 1] + b) as u32)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut chambers = Vec::new();
        let mut flag = Vec::with_capacity(rank);
        for a in 0..levels[0].len() {
            flag.push(a as u32);
            extend_flags(&children, &offsets, &mut flag, &mut chambers);
            flag.pop();
        }
        if chambers.len() as u128 != predicted {
            return Err(Error::Unsupported(format!(
                "flag enumeration found {} chambers, expected {predicted}",
                chambers.len()
            )));
        }
        let complex = SimplicialComplex::from_chambers(vertex_types, chambers)?;

        let coordinate: Vec<u32> = (1..=rank)
            .map(|k| {
                let rows: Vec<Vec<u8>> = (0..k).map(|i| (0..d).map(|j| (i == j) as u8).collect()).collect();
                index[&Subspace::span(&rows, spec.p)]
            })
            .collect();
        let fundamental = complex.chamber_id(&coordinate).expect("coordinate flag is a chamber");
        let mut building = TitsBuilding {
            group,
            coxeter,
            subspaces,
            index,
            complex,
            fundamental,
            apartment: Apartment {
                chambers: Vec::new(),
                lifts: Vec::new(),
                to_coxeter: HashMap::new(),
                from_coxeter: Vec::new(),
                bijective: false,
            },
        };
        building.apartment = building.build_apartment();
        Ok(building)
    }

    fn build_apartment(&self) -> Apartment {
        let weyl = self.coxeter.group();
        let fund = self.complex.simplex(self.complex.dim(), self.fundamental).to_vec();
        let n_cox = self.coxeter.complex().num_vertices();
        let mut to_coxeter: HashMap<u32, u32> = HashMap::new();
        let mut from_coxeter = vec![u32::MAX; n_cox];
        let mut bijective = true;
        let mut chambers = Vec::with_capacity(weyl.order());
        let mut lifts = Vec::with_capacity(weyl.order());
        for e in 0..weyl.order() {
            let lift = self.group.weyl_lift_element(weyl.element(e));
            let mut img: Vec<u32> = fund.iter().map(|&v| self.act_vertex(&lift, v)).collect();
            for (s, &v) in img.iter().enumerate() {
                let c = self.coxeter.vertex_of(e, s);
                if *to_coxeter.entry(v).or_insert(c) != c {
                    bijective = false;
                }
                let back = &mut from_coxeter[c as usize];
                if *back != u32::MAX && *back != v {
                    bijective = false;
                }
                *back = v;
            }
            img.sort_by_key(|&v| (self.complex.vertex_type(v), v));
            chambers.push(self.complex.chamber_id(&img).expect("image of a chamber"));
            lifts.push(lift);
        }
        bijective &= to_coxeter.len() == n_cox && from_coxeter.iter().all(|&v| v != u32::MAX);
        Apartment { chambers, lifts, to_coxeter, from_coxeter, bijective }
    }

    pub fn spec(&self) -> GroupSpec {
        self.group.spec()
    }

    pub fn group(&self) -> &ChevalleyGroup {
        &self.group
    }

    pub fn coxeter(&self) -> &CoxeterComplex {
        &self.coxeter
    }

    pub fn weyl(&self) -> &WeylGroup {
        self.coxeter.group()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn subspace(&self, v: u32) -> &Subspace {
        &self.subspaces[v as usize]
    }

    pub fn vertex_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.subspaces.len()
    }

    pub fn num_chambers(&self) -> usize {
        self.complex.num_chambers()
    }

    pub fn fundamental_chamber(&self) -> usize {
        self.fundamental
    }

    pub fn apartment(&self) -> &Apartment {
        &self.apartment
    }

    /// `Σ_w p^{ℓ(w)}`.
    pub fn predicted_chambers(&self) -> u128 {
        poincare_at(&self.weyl().poincare_polynomial(), self.spec().p as u128)
    }

    /// `p^{|Φ⁺|}`.
    pub fn predicted_steinberg_dim(&self) -> u128 {
        (self.spec().p as u128).pow(self.group.root_system().num_positive() as u32)
    }

    pub fn act_vertex(&self, g: &GroupElement, v: u32) -> u32 {
        self.index[&self.subspaces[v as usize].image(g)]
    }

    fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.spec() != self.spec() {
            return Err(Error::Mismatch { what: "groups", left: g.spec().to_string(), right: self.spec().to_string() });
        }
        Ok(())
    }

    pub fn vertex_map(&self, g: &GroupElement) -> Result<Vec<u32>> {
        self.check_element(g)?;
        Ok((0..self.num_vertices() as u32).map(|v| self.act_vertex(g, v)).collect())
    }

    /// `Σ_w (-1)^{ℓ(w)} w̃·C` over `ℤ`.
    pub fn standard_apartment_class(&self) -> Chain<Integers> {
        let weyl = self.weyl();
        Chain::from_terms(
            Integers,
            self.complex.dim() as isize,
            self.apartment
                .chambers
                .iter()
                .enumerate()
                .map(|(e, &c)| (c, if weyl.length_of(e).is_multiple_of(2) { 1 } else { -1 })),
        )
    }

    /// `g · chain`.
    pub fn translate_class<R: Ring>(&self, g: &GroupElement, chain: &Chain<R>) -> Result<Chain<R>> {
        self.check_element(g)?;
        let memo = RefCell::new(HashMap::new());
        self.complex.map_chain(chain, |v| *memo.borrow_mut().entry(v).or_insert_with(|| self.act_vertex(g, v)))
    }

    /// `γ = γ₁ w_{α_0} γ₁⁻¹`, which negates `γ₁·[Σ]`.
    pub fn invert_class(&self, gamma1: &GroupElement) -> Result<GroupElement> {
        self.check_element(gamma1)?;
        let w = self.group.weyl_lift_simple(0);
        Ok(gamma1.mul(&w).mul(&gamma1.inverse()))
    }

    /// Checks that `F` is a simplicial isomorphism onto the Coxeter complex,
    /// that it intertwines `w_{α_i}` with `s_i`, and that the torus fixes the
    /// apartment pointwise.
    pub fn apartment_check(&self) -> ApartmentReport {
        let a = &self.apartment;
        let cox = &self.coxeter;
        let weyl = self.weyl();
        let mut chamber_ids: Vec<usize> = a.chambers.clone();
        chamber_ids.sort_unstable();
        chamber_ids.dedup();
        let chambers_distinct = chamber_ids.len() == weyl.order();

        let equivariant = a.bijective
            && (0..self.spec().rank()).all(|i| {
                let w = self.group.weyl_lift_simple(i);
                a.to_coxeter.iter().all(|(&v, &c)| {
                    let image = self.act_vertex(&w, v);
                    a.to_coxeter(image) == Some(cox.generator_action(i, c))
                })
            });
        let torus_fixes =
            self.group.torus_generators().iter().all(|h| a.to_coxeter.keys().all(|&v| self.act_vertex(h, v) == v));
        let class_matches = a.bijective
            && cox
                .complex()
                .map_chain_into(&self.complex, &cox.standard_apartment_class(), |v| a.from_coxeter(v))
                .is_ok_and(|c| c == self.standard_apartment_class());
        ApartmentReport {
            chambers: a.chambers.len(),
            vertices: a.num_vertices(),
            isomorphism: a.bijective && chambers_distinct,
            equivariant,
            torus_fixes_apartment: torus_fixes,
            class_matches_coxeter: class_matches,
        }
    }

    /// Whether `s·[Σ] = -[Σ]` for the lift of every simple reflection.
    pub fn sign_reversal(&self) -> Vec<bool> {
        let class = self.standard_apartment_class();
        (0..self.spec().rank())
            .map(|i| {
                let w = self.group.weyl_lift_simple(i);
                self.translate_class(&w, &class).is_ok_and(|img| img == class.neg())
            })
            .collect()
    }

    /// The Steinberg module over a field: the top cycle space.
    pub fn steinberg<F: Field>(&self, field: &F) -> SteinbergSpace<F> {
        let basis = homology::kernel_basis(&self.complex, self.complex.dim(), field);
        SteinbergSpace { ring: field.name(), dimension: basis.len(), basis }
    }

    pub fn solomon_tits_check(&self) -> SolomonTitsReport {
        let profile = homology::integral_homology(&self.complex);
        let top = self.complex.dim() as isize;
        let expected = self.predicted_steinberg_dim();
        let top_rank = profile.rank(top);
        SolomonTitsReport {
            top_degree: top,
            top_rank,
            expected_top_rank: expected,
            vanishes_elsewhere: profile
                .degrees
                .iter()
                .all(|h| h.degree == top || (h.rank == 0 && h.torsion.is_empty())),
            top_free: profile.degrees.iter().all(|h| h.torsion.is_empty()),
            profile,
        }
    }

    /// Rank of the span of the translates `g·[Σ]`, walking `G` in canonical
    /// order and stopping once the span is all of `St`.
    pub fn generation_check<F: Field>(&self, field: &F, group: &GroupEnumeration) -> Result<GenerationReport> {
        let st_dim = self.steinberg(field).dimension;
        let (span_dim, tried, spanning) = self.independent_translates(field, group, st_dim)?;
        Ok(GenerationReport {
            ring: field.name(),
            st_dim,
            span_dim,
            translates_tried: tried,
            full_rank_prefix: (span_dim == st_dim).then_some(tried),
            group_order: group.order(),
            independent: spanning.len(),
        })
    }

    /// Returns (span rank, translates examined, indices of the independent ones).
    fn independent_translates<F: Field>(
        &self,
        field: &F,
        group: &GroupEnumeration,
        st_dim: usize,
    ) -> Result<(usize, usize, Vec<usize>)> {
        if group.spec() != self.spec() {
            return Err(Error::Mismatch {
                what: "groups",
                left: group.spec().to_string(),
                right: self.spec().to_string(),
            });
        }
        let class = self.standard_apartment_class().change_ring(field);
        let mut span = EchelonBasis::new(field.clone(), self.num_chambers());
        let mut chosen = Vec::new();
        let mut tried = 0;
        for (k, g) in group.elements().iter().enumerate() {
            if span.rank() == st_dim {
                break;
            }
            tried += 1;
            if span.insert(self.translate_class(g, &class)?.to_sparse()) {
                chosen.push(k);
            }
        }
        Ok((span.rank(), tried, chosen))
    }

    /// Checks `γ·(γ₁·[Σ]) = -(γ₁·[Σ])` for `samples` random `γ₁ ∈ G`.
    pub fn inversion_check<G: Rng + ?Sized>(
        &self,
        group: &GroupEnumeration,
        samples: usize,
        rng: &mut G,
    ) -> Result<InversionReport> {
        let class = self.standard_apartment_class();
        let mut exact = 0;
        let mut all_in_group = true;
        for _ in 0..samples {
            let g1 = &group.elements()[rng.random_range(0..group.order())];
            let a = self.translate_class(g1, &class)?;
            let gamma = self.invert_class(g1)?;
            all_in_group &= group.contains(&gamma);
            if self.translate_class(&gamma, &a)? == a.neg() {
                exact += 1;
            }
        }
        Ok(InversionReport { samples, exact, gamma_in_group: all_in_group })
    }

    /// Dimension of the coinvariants `St_G` over `field`, computed twice.
    ///
    /// `direct`: `dim St - rank{g·v - v}` over the group generators `g` and a
    /// basis `v` of `St`. `via_inversion`: take translates `a = g·[Σ]`
    /// spanning `St`, form `γ = invert_class(g)`, and quotient by the span of
    /// `γ·a - a = -2a`. The second is an upper bound for the first and both
    /// vanish whenever 2 is invertible.
    pub fn coinvariants_dim<F: Field>(&self, field: &F, group: &GroupEnumeration) -> Result<CoinvariantsReport> {
        let st = self.steinberg(field);
        let n = self.num_chambers();
        let gens = self.group.generators();
        let mut rel = EchelonBasis::new(field.clone(), n);
        for g in &gens {
            for v in &st.basis {
                let diff = self.translate_class(g, v)?.sub(v)?;
                rel.insert(diff.to_sparse());
            }
        }
        let direct = st.dimension - rel.rank();

        let (_, _, chosen) = self.independent_translates(field, group, st.dimension)?;
        let class = self.standard_apartment_class().change_ring(field);
        let mut rel2 = EchelonBasis::new(field.clone(), n);
        let mut inversion_exact = true;
        for &k in &chosen {
            let g = &group.elements()[k];
            let a = self.translate_class(g, &class)?;
            let gamma = self.invert_class(g)?;
            let ga = self.translate_class(&gamma, &a)?;
            inversion_exact &= ga == a.neg();
            rel2.insert(ga.sub(&a)?.to_sparse());
        }
        let via_inversion = st.dimension - rel2.rank();
        Ok(CoinvariantsReport {
            ring: field.name(),
            characteristic: field.characteristic(),
            st_dim: st.dimension,
            generators: gens.len(),
            direct,
            via_inversion,
            inversion_exact,
        })
    }

    /// Number of chambers on each panel; a thick building over `F_p` has
    /// `p+1` everywhere.
    pub fn thickness(&self) -> ThicknessReport {
        let degrees = self.complex.panel_degrees();
        let p = self.spec().p as usize;
        ThicknessReport { panels: degrees.len(), expected: p + 1, all_equal: degrees.iter().all(|&d| d == p + 1) }
    }

    /// Samples upper-triangular elements and checks that each fixes `C`.
    pub fn borel_check<G: Rng + ?Sized>(&self, group: &GroupEnumeration, samples: usize, rng: &mut G) -> BorelReport {
        let borel: Vec<&GroupElement> = group.elements().iter().filter(|g| g.is_upper_triangular()).collect();
        let fund = self.complex.simplex(self.complex.dim(), self.fundamental);
        let mut fixed = 0;
        for _ in 0..samples {
            let b = borel[rng.random_range(0..borel.len())];
            if fund.iter().all(|&v| self.act_vertex(b, v) == v) {
                fixed += 1;
            }
        }
        BorelReport { borel_order: borel.len(), samples, fixed }
    }

    /// Every chamber is `g·C` for some `g` in the group.
    pub fn chamber_transitive(&self, group: &GroupEnumeration) -> bool {
        let fund = self.complex.simplex(self.complex.dim(), self.fundamental).to_vec();
        let mut hit = vec![false; self.num_chambers()];
        for g in group.elements() {
            let mut img: Vec<u32> = fund.iter().map(|&v| self.act_vertex(g, v)).collect();
            img.sort_by_key(|&v| (self.complex.vertex_type(v), v));
            match self.complex.chamber_id(&img) {
                Some(c) => hit[c] = true,
                None => return false,
            }
        }
        hit.iter().all(|&h| h)
    }

    /// Builds the group enumeration for this building, sharing its cache.
    pub fn enumerate_group(&self, opts: &GroupEnumOptions) -> Result<GroupEnumeration> {
        self.group.enumerate(opts)
    }
}

fn extend_flags(children: &[Vec<Vec<u32>>], offsets: &[usize], flag: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let t = flag.len() - 1;
    if t == children.len() {
        out.push(flag.clone());
        return;
    }
    let last = *flag.last().expect("nonempty flag") as usize - offsets[t];
    for &next in &children[t][last] {
        flag.push(next);
        extend_flags(children, offsets, flag, out);
        flag.pop();
    }
}

fn poincare_at(coeffs: &[u64], q: u128) -> u128 {
    coeffs.iter().rev().fold(0u128, |acc, &c| acc * q + c as u128)
}

#[derive(Debug, Clone)]
pub struct SteinbergSpace<F: Field> {
    pub ring: String,
    pub dimension: usize,
    pub basis: Vec<Chain<F>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApartmentReport {
    pub chambers: usize,
    pub vertices: usize,
    pub isomorphism: bool,
    pub equivariant: bool,
    pub torus_fixes_apartment: bool,
    pub class_matches_coxeter: bool,
}

impl ApartmentReport {
    pub fn passed(&self) -> bool {
        self.isomorphism && self.equivariant && self.torus_fixes_apartment && self.class_matches_coxeter
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolomonTitsReport {
    pub top_degree: isize,
    pub top_rank: usize,
    pub expected_top_rank: u128,
    pub vanishes_elsewhere: bool,
    pub top_free: bool,
    pub profile: HomologyProfile,
}

impl SolomonTitsReport {
    pub fn passed(&self) -> bool {
        self.vanishes_elsewhere && self.top_free && self.top_rank as u128 == self.expected_top_rank
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationReport {
    pub ring: String,
    pub st_dim: usize,
    pub span_dim: usize,
    pub translates_tried: usize,
    pub full_rank_prefix: Option<usize>,
    pub group_order: usize,
    pub independent: usize,
}

impl GenerationReport {
    pub fn passed(&self) -> bool {
        self.span_dim == self.st_dim
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InversionReport {
    pub samples: usize,
    pub exact: usize,
    pub gamma_in_group: bool,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.exact == self.samples && self.gamma_in_group
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoinvariantsReport {
    pub ring: String,
    pub characteristic: u64,
    pub st_dim: usize,
    pub generators: usize,
    pub direct: usize,
    pub via_inversion: usize,
    pub inversion_exact: bool,
}

impl CoinvariantsReport {
    /// Both routes give zero. Only meaningful when 2 is invertible.
    pub fn vanishes(&self) -> bool {
        self.direct == 0 && self.via_inversion == 0 && self.inversion_exact
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessReport {
    pub panels: usize,
    pub expected: usize,
    pub all_equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BorelReport {
    pub borel_order: usize,
    pub samples: usize,
    pub fixed: usize,
}
