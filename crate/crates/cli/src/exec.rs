//! Dispatch of a parsed scenario to the library.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{Map, Value};

use arithdisc::kummer::{build_kummer, hensel_root, kummer_verify, TwistBounds};
use arithdisc::matfact::{general_factor, near_identity_factor, verify_near_identity, GeneralOptions, SeriesMatrix};
use arithdisc::numfield::Localization;
use arithdisc::patch::{assemble, is_galois_group, random_near_identity, validate_patching, FiniteGroup, PatchingInput};
use arithdisc::regroot::{normalize_poly, recursive_root, SeriesPolynomial};
use arithdisc::series::{split_series, weierstrass_divide, DivisionMode, Layout, RingDescriptor, TruncatedSeries};
use arithdisc::{CheckEntry, Config, Error, Verdict};

use crate::gen;
use crate::report::{field_elements, integer_strings, rational_strings, series_value, Report};
use crate::scenario::{schema, Elem, FieldSpec, Kind, Num, Scenario, SchemaError, SchemaResult};

/// Checks and named results of one run.
#[derive(Default)]
struct Outcome {
    entries: Vec<CheckEntry>,
    results: Map<String, Value>,
}

impl Outcome {
    fn check(&mut self, name: &str, ok: bool, details: impl Into<String>) {
        self.entries.push(CheckEntry::check(name, ok, details));
    }

    fn verdict(&mut self, name: &str, status: Verdict, details: impl Into<String>) {
        self.entries.push(CheckEntry::new(name, status, details));
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }
}

enum Failure {
    Schema(SchemaError),
    Module(&'static str, Error),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Schema(e)
    }
}

trait Stage<T> {
    fn stage(self, name: &'static str) -> Result<T, Failure>;
}

impl<T> Stage<T> for arithdisc::Result<T> {
    fn stage(self, name: &'static str) -> Result<T, Failure> {
        self.map_err(|e| Failure::Module(name, e))
    }
}

/// Runs a scenario. Module errors become error entries; schema problems in
/// the parameters become a single `schema` error entry.
pub fn execute(sc: &Scenario) -> Report {
    let start = Instant::now();
    let mut cfg = Config::default();
    if let Some(cap) = sc.precision_cap {
        cfg = cfg.with_precision_cap(cap);
    }
    let mut out = Outcome::default();
    let res = match sc.kind {
        Kind::Hensel => hensel(sc, &mut out),
        Kind::Kummer => kummer(sc, &cfg, &mut out),
        Kind::Wdiv => wdiv(sc, &cfg, &mut out),
        Kind::Split => split(sc, &cfg, &mut out),
        Kind::Factor => factor(sc, &cfg, &mut out),
        Kind::Root => root(sc, &mut out),
        Kind::PatchDrill => patch_drill(sc, &cfg, &mut out),
    };
    match res {
        Ok(()) => {}
        Err(Failure::Schema(e)) => out.entries.push(CheckEntry::new("schema", Verdict::Error, e.0)),
        Err(Failure::Module(stage, e)) => out.entries.push(CheckEntry::error(stage, &e)),
    }
    Report::new(sc.echo(), out.entries, out.results, start.elapsed().as_millis())
}

/// Report for a scenario that could not be parsed at all.
pub fn schema_report(scenario: Value, err: &SchemaError) -> Report {
    Report::new(scenario, vec![CheckEntry::new("schema", Verdict::Error, err.0.clone())], Map::new(), 0)
}

fn localization(sc: &Scenario, base: &Elem) -> Result<Arc<Localization>, Failure> {
    let a = base.integer_element(&sc.field)?;
    Ok(Arc::new(Localization::new(sc.field.clone(), a).stage("localization")?))
}

fn rng(sc: &Scenario) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sc.seed)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HenselParams {
    #[serde(default = "two")]
    k: u32,
}

fn two() -> u32 {
    2
}

fn hensel(sc: &Scenario, out: &mut Outcome) -> Result<(), Failure> {
    let p: HenselParams = sc.params()?;
    if p.k == 0 {
        return Err(schema("k must be positive").into());
    }
    let f = hensel_root(p.k, sc.order).stage("hensel_root")?;
    let coeffs: Vec<Value> = f.field_coeffs().iter().map(|c| Value::String(c.0[0].to_string())).collect();
    out.put("coefficients", coeffs);
    out.check("integral", f.is_integral(), "coefficients lie in Z");
    let k2 = i64::from(p.k) * i64::from(p.k);
    let target = TruncatedSeries::from_ints(f.ring(), &[1, -k2], sc.order);
    out.check("power_identity", f.pow(p.k) == target, format!("f^{} = 1 - {k2} t mod t^{}", p.k, sc.order));
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KummerParams {
    #[serde(default = "default_base")]
    base: Elem,
    #[serde(default = "two")]
    k: u32,
    #[serde(default)]
    degree_bound: Option<u32>,
    #[serde(default)]
    height_bound: Option<u32>,
    #[serde(default)]
    max_exponent: Option<u32>,
}

fn default_base() -> Elem {
    Elem::int(2)
}

fn kummer(sc: &Scenario, cfg: &Config, out: &mut Outcome) -> Result<(), Failure> {
    let p: KummerParams = sc.params()?;
    let loc = localization(sc, &p.base)?;
    let d = TwistBounds::default();
    let bounds = TwistBounds {
        degree_bound: p.degree_bound.unwrap_or(d.degree_bound),
        height_bound: p.height_bound.unwrap_or(d.height_bound),
        max_exponent: p.max_exponent.unwrap_or(d.max_exponent),
    };
    let data = build_kummer(loc, p.k, sc.order, &bounds, cfg).stage("build_kummer")?;
    out.put("b", rational_strings(&data.twist.b));
    out.put("m", data.twist.m);
    out.put("g", series_value(&data.g));
    let rep = kummer_verify(&data).stage("kummer_verify")?;
    out.put("zeta", integer_strings(&rep.zeta));
    out.entries.extend(rep.checks);
    Ok(())
}

#[derive(Deserialize, Clone, Copy, Default)]
#[serde(rename_all = "lowercase")]
enum ModeParam {
    #[default]
    Remainder,
    Quotient,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WdivParams {
    #[serde(default = "default_base")]
    base: Elem,
    #[serde(default)]
    mode: ModeParam,
    #[serde(default)]
    f: Option<Vec<Elem>>,
    #[serde(default)]
    g: Option<Vec<Elem>>,
    /// Valuation of a generated divisor.
    #[serde(default)]
    shift: usize,
}

fn wdiv(sc: &Scenario, cfg: &Config, out: &mut Outcome) -> Result<(), Failure> {
    let p: WdivParams = sc.params()?;
    let ring = RingDescriptor::formal(localization(sc, &p.base)?);
    let mut rng = rng(sc);
    let f = match &p.f {
        Some(c) => crate::scenario::series(&ring, c, sc.order)?,
        None => gen::series(&ring, sc.order, 5, 2, &mut rng),
    };
    let g = match &p.g {
        Some(c) => crate::scenario::series(&ring, c, sc.order)?,
        None => gen::divisor(&ring, sc.order, p.shift, 5, &mut rng),
    };
    let mode = match p.mode {
        ModeParam::Remainder => DivisionMode::BoundRemainder,
        ModeParam::Quotient => DivisionMode::BoundQuotient,
    };
    let res = weierstrass_divide(&f, &g, mode, cfg).stage("weierstrass_divide")?;
    out.put("f", series_value(&f));
    out.put("g", series_value(&g));
    out.put("remainder", series_value(&res.remainder));
    out.put("quotient", series_value(&res.quotient));
    out.put("shift", res.shift);
    out.put("scale_exp", res.scale_exp);

    let r = res.remainder.convert(&ring).stage("remainder")?;
    let h = res.quotient.convert(&ring).stage("quotient")?;
    out.check("division_identity", r.add(&g.mul(&h)) == f, "f = r + g h");
    out.check("quotient_constant", h.coeff(0) == &ring.loc.one(), "h_0 = 1");
    out.check(
        "tail_integrality",
        res.non_integral.iter().all(|&i| i == res.shift),
        format!("non-integral indices {:?}", res.non_integral),
    );
    out.verdict("norm_bounds", res.verdict, format!("{} coefficient bounds", res.checks.len()));
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutParams {
    #[serde(default = "default_layout")]
    layout: Vec<Elem>,
    #[serde(default)]
    one_index: usize,
    #[serde(default)]
    i: usize,
}

fn default_layout() -> Vec<Elem> {
    vec![Elem::int(2), Elem::int(3), Elem::int(5)]
}

fn layout(sc: &Scenario, p: &LayoutParams) -> Result<Layout, Failure> {
    let elements = p.layout.iter().map(|e| e.integer_element(&sc.field)).collect::<SchemaResult<Vec<_>>>()?;
    if p.i >= elements.len() || p.one_index >= elements.len() {
        return Err(schema("`i` and `one_index` must index the layout").into());
    }
    Layout::new(sc.field.clone(), elements, p.one_index).stage("layout")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitParams {
    #[serde(flatten)]
    layout: LayoutParams,
    #[serde(default)]
    f: Option<Vec<Elem>>,
}

fn split(sc: &Scenario, cfg: &Config, out: &mut Outcome) -> Result<(), Failure> {
    let p: SplitParams = sc.params()?;
    let layout = layout(sc, &p.layout)?;
    let all = layout.ring_all();
    let f = match &p.f {
        Some(c) => crate::scenario::series(&all, c, sc.order)?,
        None => gen::series(&all, sc.order, 8, 3, &mut rng(sc)),
    };
    let res = split_series(&layout, &f, p.layout.i, cfg).stage("split_series")?;
    out.put("f", series_value(&f));
    out.put("g", series_value(&res.g));
    out.put("h", series_value(&res.h));
    let sum = res.g.convert(&all).and_then(|g| Ok(g.add(&res.h.convert(&all)?))).stage("recombine")?;
    out.check("additivity", sum == f, "g + h = f");
    out.check(
        "valuation",
        res.g.valuation() >= f.valuation() && res.h.valuation() >= f.valuation(),
        format!("v(f) = {}, v(g) = {}, v(h) = {}", f.valuation(), res.g.valuation(), res.h.valuation()),
    );
    out.verdict("norm_bounds", res.verdict, format!("{} coefficient bounds", res.checks.len()));
    Ok(())
}

#[derive(Deserialize, Clone, Copy, Default, PartialEq)]
#[serde(rename_all = "snake_case")]
enum Method {
    NearIdentity,
    #[default]
    General,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorParams {
    #[serde(flatten)]
    layout: LayoutParams,
    #[serde(default)]
    method: Method,
    #[serde(default = "default_dim")]
    dim: usize,
    /// Row-major entries, each a list of coefficients.
    #[serde(default)]
    b: Option<Vec<Vec<Elem>>>,
    #[serde(default)]
    s: Option<Vec<Elem>>,
    #[serde(default)]
    swapped: bool,
    #[serde(default)]
    radius: Option<Num>,
}

fn default_dim() -> usize {
    2
}

fn factor(sc: &Scenario, cfg: &Config, out: &mut Outcome) -> Result<(), Failure> {
    let p: FactorParams = sc.params()?;
    let layout = layout(sc, &p.layout)?;
    let all = layout.ring_all();
    let mut rng = rng(sc);
    if p.dim == 0 {
        return Err(schema("dim must be positive").into());
    }
    let b = match &p.b {
        Some(entries) => {
            if entries.len() != p.dim * p.dim {
                return Err(schema(format!("b needs {} entries", p.dim * p.dim)).into());
            }
            let e = entries.iter().map(|c| crate::scenario::series(&all, c, sc.order)).collect::<SchemaResult<_>>()?;
            SeriesMatrix::new(p.dim, e)
        }
        None if p.method == Method::NearIdentity => random_near_identity(&all, p.dim, sc.order, 3, &mut rng),
        None => gen::unimodular(&all, p.dim, sc.order, 4, &mut rng),
    };
    let radius = match &p.radius {
        Some(r) => r.rational()?,
        None => BigRational::new(BigInt::one(), BigInt::from(2)),
    };
    let i = p.layout.i;
    match p.method {
        Method::NearIdentity => {
            let res = near_identity_factor(&layout, &b, i, &radius, cfg).stage("near_identity_factor")?;
            out.put("iterations", res.iterations);
            out.put("valuation_trace", trace(&res.valuation_trace));
            let p_prod = res.p_left.convert(&all).and_then(|l| Ok(l.mul(&b).mul(&res.p_right.convert(&all)?)));
            let p_prod = p_prod.stage("recompose")?;
            out.check("recomposition", p_prod == SeriesMatrix::identity(&all, p.dim, sc.order), "p' b p = 1");
            out.entries.extend(verify_near_identity(&layout, &b, i, &res));
            out.entries.extend(res.checks);
        }
        Method::General => {
            let s = match &p.s {
                Some(c) => crate::scenario::series(&all, c, sc.order)?,
                None => TruncatedSeries::one(&all, sc.order),
            };
            let opts = GeneralOptions { swapped: p.swapped, radius, ..Default::default() };
            let res = general_factor(&layout, &b, &s, i, &opts, cfg).stage("general_factor")?;
            out.put("iterations", res.iterations);
            out.put("valuation_trace", trace(&res.valuation_trace));
            out.put("check_order", res.check_order);
            out.put("n_eff", res.n_eff);
            out.entries.extend(res.checks);
        }
    }
    Ok(())
}

fn trace(t: &[arithdisc::series::Valuation]) -> Value {
    Value::Array(t.iter().map(|v| Value::String(v.to_string())).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootParams {
    #[serde(default = "default_base")]
    base: Elem,
    /// `p_0, p_1, ...`, each a list of coefficients.
    #[serde(default)]
    polynomial: Option<Vec<Vec<Elem>>>,
    #[serde(default = "default_degree")]
    degree: usize,
}

fn default_degree() -> usize {
    3
}

fn root(sc: &Scenario, out: &mut Outcome) -> Result<(), Failure> {
    let p: RootParams = sc.params()?;
    let h = match &p.polynomial {
        Some(ps) => {
            let ring = RingDescriptor::formal(localization(sc, &p.base)?);
            let coeffs = ps.iter().map(|c| crate::scenario::series(&ring, c, sc.order)).collect::<SchemaResult<_>>()?;
            SeriesPolynomial::new(coeffs).stage("polynomial")?
        }
        None => {
            let ring = RingDescriptor::formal(Arc::new(Localization::integral(sc.field.clone())));
            gen::normalized_polynomial(&ring, sc.order, p.degree, &mut rng(sc))
        }
    };
    let (hn, record) = normalize_poly(&h).stage("normalize_poly")?;
    out.put("shift", record.shift);
    out.put("scale_exp", record.scale_exp);
    out.put("const_exp", record.const_exp);
    out.put("beta", rational_strings(&hn.ring().loc.to_field(&record.beta)));
    let res = recursive_root(&hn).stage("recursive_root")?;
    out.put("normalized_root", series_value(&res.root));
    out.put("root", field_elements(&record.root_of_input(&res.root).stage("root_of_input")?));
    out.check("root_identity", hn.eval(&res.root).is_zero(), format!("h(y) = 0 mod t^{}", hn.order()));
    match res.integrality {
        Some(ok) => out.check("integrality", ok, "integral coefficients give an integral root"),
        None => out.verdict("integrality", Verdict::Pass, "not claimed: coefficients are not integral"),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct PatchParams {
    #[serde(default)]
    subfield: Option<FieldSpec>,
    /// Field automorphisms forming `Γ`.
    gamma_action: Vec<usize>,
    /// Multiplication table of `H`.
    H: Vec<Vec<usize>>,
    #[serde(default)]
    H_labels: Option<Vec<String>>,
    /// `action_on_H[γ][h] = h^γ`.
    action_on_H: Vec<Vec<usize>>,
    a1: Elem,
    #[serde(default = "default_spot_checks")]
    spot_checks: usize,
    #[serde(default)]
    listing: Option<Vec<usize>>,
    #[serde(default)]
    G1: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    G1_on_H: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    gamma_on_G1: Option<Vec<Vec<usize>>>,
    #[serde(default = "default_height")]
    height_bound: u32,
}

fn default_spot_checks() -> usize {
    3
}

fn default_height() -> u32 {
    6
}

fn labelled(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<FiniteGroup, Failure> {
    let labels = labels.unwrap_or_else(|| (0..table.len()).map(|i| i.to_string()).collect());
    FiniteGroup::new(labels, table).stage("group")
}

fn patch_drill(sc: &Scenario, cfg: &Config, out: &mut Outcome) -> Result<(), Failure> {
    let p: PatchParams = sc.params()?;
    let field = sc.field.clone();
    if let Some(sub) = &p.subfield {
        let k0 = sub.build()?;
        let ok = k0.degree() * p.gamma_action.len() == field.degree() && is_galois_group(&field, &p.gamma_action);
        out.check(
            "subfield_degree",
            ok,
            format!("[K : K_0] = {} / {} with |Γ| = {}", field.degree(), k0.degree(), p.gamma_action.len()),
        );
    }
    let h = labelled(p.H, p.H_labels)?;
    let a1 = p.a1.integer_element(&field)?;
    let mut input = PatchingInput::with_trivial_g1(field, p.gamma_action, h, p.action_on_H, a1, sc.order);
    if let Some(g1) = p.G1 {
        input.g1 = labelled(g1, None)?;
        input.g1_on_h = p.G1_on_H.ok_or_else(|| schema("`G1` requires `G1_on_H`"))?;
        input.gamma_on_g1 = p.gamma_on_G1.ok_or_else(|| schema("`G1` requires `gamma_on_G1`"))?;
    }
    input.listing = p.listing;
    input.spot_checks = p.spot_checks;
    input.seed = sc.seed;
    input.height_bound = p.height_bound;
    let data = assemble(&input, cfg).stage("assemble")?;
    out.put("index_size", data.index.len());
    out.put("branch", Value::Array(data.branch.iter().map(integer_strings).collect()));
    out.put("kummer_degrees", Value::Array(data.kummer_list.iter().map(|d| Value::from(d.k)).collect()));
    out.put("g_order", data.g.group.order());
    let rep = validate_patching(&data, cfg);
    out.entries.extend(rep.entries);
    Ok(())
}
