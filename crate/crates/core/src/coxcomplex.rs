//! The Coxeter complex of a finite Weyl group.
//!
//! A vertex of type `s` is a coset `w W_{S∖{s}}`, identified by its
//! minimal-length representative. The chamber of `w` is
//! `{w W_{S∖{s}} : s ∈ S}`, and chamber ids coincide with element indices in
//! the canonical enumeration order.

use crate::error::{Error, Result};
use crate::homology::{self, Chain, HomologyProfile, SimplicialComplex};
use crate::ring::{Integers, Ring};
use crate::rootsys::RootSystem;
use crate::weyl::{CosetTable, EnumerateOptions, WeylElement, WeylGroup};

/// Above this many chambers the face closure is not built by default.
pub const HOMOLOGY_CHAMBER_LIMIT: usize = 5_000;

#[derive(Debug, Clone)]
pub struct CoxeterComplex {
    group: WeylGroup,
    /// `cosets[s]` is the table of `W / W_{S∖{s}}`.
    cosets: Vec<CosetTable>,
    offsets: Vec<usize>,
    complex: SimplicialComplex,
    /// `generator_maps[i][v]` = `s_i · v`.
    generator_maps: Vec<Vec<u32>>,
}

impl CoxeterComplex {
    pub fn build(rs: &RootSystem, opts: &EnumerateOptions) -> Result<Self> {
        Self::from_group(WeylGroup::enumerate(rs, opts)?)
    }

    pub fn from_group(group: WeylGroup) -> Result<Self> {
        let rank = group.root_system().rank();
        let mut cosets = Vec::with_capacity(rank);
        let mut offsets = Vec::with_capacity(rank);
        let mut vertex_types = Vec::new();
        for s in 0..rank {
            let others: Vec<usize> = (0..rank).filter(|&t| t != s).collect();
            let table = group.parabolic_cosets(&others)?;
            offsets.push(vertex_types.len());
            vertex_types.extend(std::iter::repeat_n(s as u8, table.len()));
            cosets.push(table);
        }
        let chambers = (0..group.order())
            .map(|e| (0..rank).map(|s| (offsets[s] + cosets[s].coset_of(e)) as u32).collect())
            .collect();
        let complex = SimplicialComplex::from_chambers(vertex_types, chambers)?;
        let mut cc = CoxeterComplex { group, cosets, offsets, complex, generator_maps: Vec::new() };
        cc.generator_maps = (0..rank)
            .map(|i| {
                let s = cc.group.element(cc.group.left_generator(0, i)).clone();
                cc.vertex_map(&s)
            })
            .collect();
        Ok(cc)
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn rank(&self) -> usize {
        self.cosets.len()
    }

    /// Vertex id of the coset with id `coset` in `W / W_{S∖{s}}`.
    pub fn vertex(&self, s: usize, coset: usize) -> u32 {
        (self.offsets[s] + coset) as u32
    }

    /// `(type, coset id)` of a vertex.
    pub fn vertex_coset(&self, v: u32) -> (usize, usize) {
        let s = self.complex.vertex_type(v) as usize;
        (s, v as usize - self.offsets[s])
    }

    /// Vertex of type `s` in the chamber of the element with index `e`.
    pub fn vertex_of(&self, e: usize, s: usize) -> u32 {
        self.vertex(s, self.cosets[s].coset_of(e))
    }

    /// Chamber id of `C`, the chamber of the identity cosets.
    pub fn fundamental_chamber(&self) -> usize {
        0
    }

    /// Vertices of the fundamental chamber.
    pub fn fundamental_simplex(&self) -> &[u32] {
        self.complex.simplex(self.complex.dim(), 0)
    }

    /// `w · v` for every vertex `v`.
    pub fn vertex_map(&self, w: &WeylElement) -> Vec<u32> {
        let we = self.group.index_of(w).expect("element of this Weyl group");
        (0..self.complex.num_vertices() as u32)
            .map(|v| {
                let (s, c) = self.vertex_coset(v);
                let rep = self.cosets[s].reps()[c];
                self.vertex_of(self.group.product(we, rep), s)
            })
            .collect()
    }

    /// `s_i · v`.
    pub fn generator_action(&self, i: usize, v: u32) -> u32 {
        self.generator_maps[i][v as usize]
    }

    /// `Σ_w (-1)^{ℓ(w)} w·C` over `ℤ`.
    pub fn standard_apartment_class(&self) -> Chain<Integers> {
        let top = self.complex.dim() as isize;
        Chain::from_terms(
            Integers,
            top,
            (0..self.group.order()).map(|e| (e, if self.group.length_of(e).is_multiple_of(2) { 1 } else { -1 })),
        )
    }

    pub fn act_on_chain<R: Ring>(&self, w: &WeylElement, chain: &Chain<R>) -> Result<Chain<R>> {
        if w.kind() != self.group.root_system().kind() {
            return Err(Error::Mismatch {
                what: "Weyl group",
                left: w.kind().to_string(),
                right: self.group.root_system().kind().to_string(),
            });
        }
        let map = self.vertex_map(w);
        self.complex.map_chain(chain, |v| map[v as usize])
    }

    /// Whether `s · [Σ] = -[Σ]` holds exactly, for each generator `s`.
    pub fn sign_reversal(&self) -> Vec<bool> {
        let class = self.standard_apartment_class();
        let neg = class.neg();
        (0..self.rank())
            .map(|i| {
                let map = &self.generator_maps[i];
                self.complex.map_chain(&class, |v| map[v as usize]).is_ok_and(|img| img == neg)
            })
            .collect()
    }

    pub fn integral_homology(&self) -> HomologyProfile {
        homology::integral_homology(&self.complex)
    }

    /// The sphere checks: reduced integral homology `ℤ` in degree `|S|-1`
    /// and nothing else, and every panel in exactly two chambers.
    pub fn sphere_check(&self) -> SphereCheck {
        let profile = self.integral_homology();
        let top = self.complex.dim() as isize;
        let homology_ok = profile.is_concentrated_in(top) && profile.rank(top) == 1;
        let panels_ok = self.complex.panel_degrees().iter().all(|&d| d == 2);
        SphereCheck { profile, homology_ok, panels_ok }
    }
}

#[derive(Debug, Clone)]
pub struct SphereCheck {
    pub profile: HomologyProfile,
    pub homology_ok: bool,
    pub panels_ok: bool,
}

impl SphereCheck {
    pub fn passed(&self) -> bool {
        self.homology_ok && self.panels_ok
    }
}
