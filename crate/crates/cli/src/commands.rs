use std::path::PathBuf;

use chevlab::building::{BuildingOptions, CoinvariantsReport, TitsBuilding};
use chevlab::chevalley_fq::GroupEnumOptions;
use chevlab::coxcomplex::{CoxeterComplex, HOMOLOGY_CHAMBER_LIMIT};
use chevlab::integral_type_a::{self, ModularSymbol};
use chevlab::{
    Cache, CartanType, ChevalleyGroup, Coefficients, EnumerateOptions, Error, GroupEnumeration, GroupSpec, PrimeField,
    Rationals, RootSystem, WeylGroup,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{meta, Outcome, Report};

/// Settings shared by all commands.
pub struct Context {
    pub cache: Option<Cache>,
    pub meta: bool,
    pub seed: u64,
    pub ring: Coefficients,
}

impl Context {
    /// `CHEVLAB_CACHE`, else the platform cache directory.
    pub fn cache_dir() -> Option<PathBuf> {
        match std::env::var_os("CHEVLAB_CACHE") {
            Some(dir) if !dir.is_empty() => Some(PathBuf::from(dir)),
            _ => dirs::cache_dir().map(|d| d.join("chevlab")),
        }
    }

    fn report(&self, command: &'static str, input: Value) -> Report {
        Report::new(command, input, meta(self.meta, self.cache.as_ref().map(Cache::dir)))
    }

    fn weyl_options(&self, allow_e7: bool) -> EnumerateOptions {
        EnumerateOptions { allow_e7, cache: self.cache.clone(), ..Default::default() }
    }
}

/// Runs an enumeration with the cache, falling back to a fresh computation
/// if the cache file is unreadable.
fn with_cache_fallback<T>(cached: bool, run: impl Fn(bool) -> Result<T, Error>) -> Result<T, Error> {
    match run(cached) {
        Err(Error::Cache { path, reason }) if cached => {
            eprintln!("warning: ignoring cache file {path}: {reason}");
            run(false)
        }
        other => other,
    }
}

pub fn rootsys(ctx: &Context, label: &str, rank: usize) -> Result<Report, Error> {
    let kind = CartanType::parse(label, rank)?;
    let rs = RootSystem::build(kind);
    let mut r = ctx.report("rootsys", json!({"type": label.to_uppercase(), "rank": rank}));
    let data = rs.cartan_and_coxeter();
    r.set("label", kind.to_string());
    r.set("roots", rs.num_roots());
    r.set("positive_roots", rs.num_positive());
    r.set("cartan", &data.cartan);
    r.set("coxeter", &data.coxeter);
    r.set("vcd_over_Z", rs.vcd_over_z());
    r.set("symmetric_space_dim", rs.symmetric_space_dim());
    r.set("positive_root_list", &rs.roots()[..rs.num_positive()]);

    r.check("positive_root_count", || {
        let closed = kind.positive_root_count();
        let sign_coherent = rs.roots().iter().all(|c| c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0));
        Ok::<_, Error>(Outcome::new(
            closed == rs.num_positive() && sign_coherent && rs.num_roots() == 2 * closed,
            json!({"enumerated": rs.num_positive(), "closed_form": closed}),
        ))
    })?;
    r.check("vcd_formula", || {
        let vcd = rs.vcd_over_z();
        Ok::<_, Error>(Outcome::new(
            vcd == rs.num_positive() && vcd == rs.symmetric_space_dim() - rs.rank(),
            json!({"vcd_over_Z": vcd, "r": rs.symmetric_space_dim(), "rank": rs.rank()}),
        ))
    })?;
    Ok(r)
}

pub fn coxeter(ctx: &Context, label: &str, rank: usize, allow_e7: bool) -> Result<Report, Error> {
    let kind = CartanType::parse(label, rank)?;
    let rs = RootSystem::build(kind);
    let mut r = ctx.report("coxeter", json!({"type": label.to_uppercase(), "rank": rank}));
    let group = with_cache_fallback(ctx.cache.is_some(), |cached| {
        let mut opts = ctx.weyl_options(allow_e7);
        if !cached {
            opts.cache = None;
        }
        WeylGroup::enumerate(&rs, &opts)
    })?;
    let poincare = group.poincare_polynomial();
    r.set("label", kind.to_string());
    r.set("order", group.order());
    r.set("poincare", &poincare);
    r.set("cache_hit", group.was_loaded_from_cache());

    r.check("weyl_order", || {
        let total: u64 = poincare.iter().sum();
        let palindromic = poincare.iter().eq(poincare.iter().rev());
        let degree = poincare.len() - 1;
        Ok::<_, Error>(Outcome::new(
            group.order() as u128 == kind.weyl_order()
                && total == group.order() as u64
                && palindromic
                && degree == rs.num_positive(),
            json!({
                "order": group.order(),
                "closed_form": kind.weyl_order().to_string(),
                "poincare_at_1": total,
                "degree": degree,
                "palindromic": palindromic,
            }),
        ))
    })?;
    let cc = CoxeterComplex::from_group(group)?;
    r.set("chambers", cc.complex().num_chambers());
    r.set("vertices", cc.complex().num_vertices());
    r.check("sphere", || {
        if cc.complex().num_chambers() > HOMOLOGY_CHAMBER_LIMIT {
            return Ok::<_, Error>(Outcome::skipped(
                json!({"chambers": cc.complex().num_chambers()}),
                format!("homology is computed up to {HOMOLOGY_CHAMBER_LIMIT} chambers"),
            ));
        }
        let s = cc.sphere_check();
        Ok(Outcome::new(
            s.passed(),
            json!({
                "betti": s.profile.betti_from_zero(),
                "homology": s.profile,
                "two_chambers_per_panel": s.panels_ok,
            }),
        ))
    })?;
    if cc.complex().num_chambers() <= HOMOLOGY_CHAMBER_LIMIT {
        let betti = cc.integral_homology().betti_from_zero();
        r.set("betti", betti);
    }
    r.check("sign_reversal", || {
        let per_gen = cc.sign_reversal();
        Ok::<_, Error>(Outcome::new(per_gen.iter().all(|&b| b), json!({"per_generator": per_gen})))
    })?;
    Ok(r)
}

fn build(ctx: &Context, spec: GroupSpec) -> Result<TitsBuilding, Error> {
    with_cache_fallback(ctx.cache.is_some(), |cached| {
        TitsBuilding::build(
            spec,
            &BuildingOptions { cache: if cached { ctx.cache.clone() } else { None }, ..Default::default() },
        )
    })
}

fn enumerate(ctx: &Context, group: &ChevalleyGroup) -> Result<GroupEnumeration, Error> {
    with_cache_fallback(ctx.cache.is_some(), |cached| {
        group
            .enumerate(&GroupEnumOptions { cache: if cached { ctx.cache.clone() } else { None }, ..Default::default() })
    })
}

fn group_input(ctx: &Context, group: &str, n: usize, p: u32) -> Value {
    json!({"group": group.to_lowercase(), "n": n, "p": p, "ring": ctx.ring.name()})
}

/// Counts, Solomon-Tits and the Steinberg rank. Shared by `building` and
/// `verify`.
fn building_checks(ctx: &Context, r: &mut Report, b: &TitsBuilding) -> Result<(), Error> {
    r.set("vertices", b.num_vertices());
    r.set("chambers", b.num_chambers());
    r.set("dimension", b.complex().dim());
    r.check("chamber_count", || {
        Ok::<_, Error>(Outcome::new(
            b.num_chambers() as u128 == b.predicted_chambers(),
            json!({"chambers": b.num_chambers(), "poincare_at_p": b.predicted_chambers().to_string()}),
        ))
    })?;
    let mut top_rank = 0;
    r.check("solomon_tits", || {
        let st = b.solomon_tits_check();
        top_rank = st.top_rank;
        Ok::<_, Error>(Outcome::new(
            st.passed(),
            json!({
                "top_degree": st.top_degree,
                "top_rank": st.top_rank,
                "vanishes_elsewhere": st.vanishes_elsewhere,
                "torsion_free": st.top_free,
                "homology": st.profile,
            }),
        ))
    })?;
    let st_dim = match ctx.ring {
        Coefficients::Integers => top_rank,
        Coefficients::Rationals => b.steinberg(&Rationals).dimension,
        Coefficients::Prime(p) => b.steinberg(&PrimeField::new(p)?).dimension,
    };
    r.set("st_dim", st_dim);
    r.set("ring", ctx.ring.name());
    r.check("steinberg_dim", || {
        let expect = b.predicted_steinberg_dim();
        Ok::<_, Error>(Outcome::new(
            st_dim as u128 == expect,
            json!({"ring": ctx.ring.name(), "st_dim": st_dim, "expected": expect.to_string()}),
        ))
    })?;
    r.check("thickness", || {
        let t = b.thickness();
        let ok = b.complex().dim() == 0 || t.all_equal;
        Ok::<_, Error>(Outcome::new(ok, serde_json::to_value(&t).unwrap_or(Value::Null)))
    })?;
    Ok(())
}

pub fn building(ctx: &Context, group: &str, n: usize, p: u32) -> Result<Report, Error> {
    let spec = GroupSpec::parse(group, n, p)?;
    let b = build(ctx, spec)?;
    let mut r = ctx.report("building", group_input(ctx, group, n, p));
    r.set("label", spec.to_string());
    building_checks(ctx, &mut r, &b)?;
    Ok(r)
}

fn coinvariants_outcome(c: CoinvariantsReport, constrained: bool) -> Outcome {
    let measured = serde_json::to_value(&c).unwrap_or(Value::Null);
    if constrained {
        Outcome::new(c.vanishes(), measured)
    } else {
        Outcome::skipped(measured, "reported only: 2 is not invertible in this ring")
    }
}

pub fn verify(ctx: &Context, group: &str, n: usize, p: u32, samples: usize) -> Result<Report, Error> {
    let spec = GroupSpec::parse(group, n, p)?;
    let b = build(ctx, spec)?;
    let g = enumerate(ctx, b.group())?;
    let mut input = group_input(ctx, group, n, p);
    input["seed"] = json!(ctx.seed);
    input["samples"] = json!(samples);
    let mut r = ctx.report("verify", input);
    r.set("label", spec.to_string());
    r.set("group_order", g.order());
    building_checks(ctx, &mut r, &b)?;

    r.check("apartment", || {
        let a = b.apartment_check();
        Ok::<_, Error>(Outcome::new(a.passed(), serde_json::to_value(&a).unwrap_or(Value::Null)))
    })?;
    r.check("sign_reversal", || {
        let per_gen = b.sign_reversal();
        Ok::<_, Error>(Outcome::new(per_gen.iter().all(|&x| x), json!({"per_generator": per_gen})))
    })?;
    r.check("weyl_isomorphism", || {
        let w = b.group().weyl_iso_check(&g)?;
        let note = w.note.clone();
        Ok::<_, Error>(Outcome::new(w.passed(), serde_json::to_value(&w).unwrap_or(Value::Null)).with_note(note))
    })?;
    r.check("generation", || {
        let gen = b.generation_check(&Rationals, &g)?;
        Ok::<_, Error>(Outcome::new(gen.passed(), serde_json::to_value(&gen).unwrap_or(Value::Null)))
    })?;
    r.check("inversion", || {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let inv = b.inversion_check(&g, samples, &mut rng)?;
        Ok::<_, Error>(Outcome::new(inv.passed(), serde_json::to_value(&inv).unwrap_or(Value::Null)))
    })?;
    let mut q_dim = None;
    r.check("coinvariants_Q", || {
        let c = b.coinvariants_dim(&Rationals, &g)?;
        q_dim = Some(c.direct);
        Ok::<_, Error>(coinvariants_outcome(c, true))
    })?;
    for l in [3u64, 5] {
        r.check(&format!("coinvariants_F{l}"), || {
            Ok::<_, Error>(coinvariants_outcome(b.coinvariants_dim(&PrimeField::new(l)?, &g)?, true))
        })?;
    }
    r.check("coinvariants_F2", || {
        Ok::<_, Error>(coinvariants_outcome(b.coinvariants_dim(&PrimeField::new(2)?, &g)?, false))
    })?;
    r.set("coinvariants_dim", q_dim);
    Ok(r)
}

pub fn reduce(ctx: &Context, symbol: &str) -> Result<Report, Error> {
    let sym = ModularSymbol::parse(symbol)?;
    let mut r = ctx.report("reduce", json!({"symbol": symbol}));
    let path = integral_type_a::reduce(&sym);
    let (v1, v2) = sym.columns();
    r.set("columns", [v1, v2]);
    r.set("det", sym.det());
    r.set("integral", sym.is_integral());
    r.set("path", &path);
    r.check("unimodular_path", || {
        let dets: Vec<i64> = path.windows(2).map(|w| integral_type_a::det(w[0], w[1])).collect();
        let ok = dets.iter().all(|d| d.abs() == 1) && path.first() == Some(&v1) && path.last() == Some(&v2);
        Ok::<_, Error>(Outcome::new(ok, json!({"length": path.len(), "dets": dets})))
    })?;
    if sym.is_integral() {
        r.check("integral_inversion", || {
            let (gamma, gamma1) = integral_type_a::invert_integral(&sym)?;
            let w = integral_type_a::W;
            let ok = integral_type_a::matdet(&gamma) == 1
                && integral_type_a::matmul(&gamma, &gamma1) == integral_type_a::matmul(&gamma1, &w);
            Ok::<_, Error>(Outcome::new(ok, json!({"gamma": gamma, "gamma1": gamma1})))
        })?;
    }
    Ok(r)
}
