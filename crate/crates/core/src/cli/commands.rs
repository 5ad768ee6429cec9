use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::format::IcwDef;
use super::report::Report;
use super::resolve::{parse_manifest, Manifest};
use crate::catmod::{hom_over_cat, tensor_over_cat, tor_via, validate_module, CatModule, TorSide, Variance};
use crate::cellspaces::{
    bredon_chains, cellular_chain_complex, classifying_model, contractibility_check, underlying_chains, CatCWComplex, GCWComplex,
};
use crate::chainplex::{CatChainComplex, PlainChainComplex};
use crate::error::{Error, Result};
use crate::exact_abelian::FpAbGroup;
use crate::fincat::{validate_category, OrbitCategory};
use crate::verify::{
    borel_vs_quotient_check, interchange_criterion, tor_interchange_probe, verify_theorem, ComparisonClass, FgMode, TOR_PROBE_BOUND,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Validate,
    Homology,
    Bredon,
    Tor,
    Tensor,
    Hom,
    VerifyTheorem,
    DemoInterchange,
    DemoTorProbe,
    DemoClassifying,
    BorelCheck,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Validate,
        Command::Homology,
        Command::Bredon,
        Command::Tor,
        Command::Tensor,
        Command::Hom,
        Command::VerifyTheorem,
        Command::DemoInterchange,
        Command::DemoTorProbe,
        Command::DemoClassifying,
        Command::BorelCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Homology => "homology",
            Command::Bredon => "bredon",
            Command::Tor => "tor",
            Command::Tensor => "tensor",
            Command::Hom => "hom",
            Command::VerifyTheorem => "verify-theorem",
            Command::DemoInterchange => "demo-interchange",
            Command::DemoTorProbe => "demo-tor-probe",
            Command::DemoClassifying => "demo-classifying",
            Command::BorelCheck => "borel-check",
        }
    }

    /// Only the Tor probe runs without a manifest.
    pub fn needs_manifest(self) -> bool {
        self != Command::DemoTorProbe
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
            Error::Manifest(format!("unknown command {s:?} (expected one of {})", names.join(", ")))
        })
    }
}

/// Optional flags shared by all commands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub degree: Option<i64>,
    pub truncation: Option<usize>,
    pub mode: Option<FgMode>,
    pub prime: Option<u32>,
}

impl Options {
    fn normalized(&self) -> String {
        let show = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        format!(
            "degree={} truncation={} mode={} prime={}",
            show(self.degree.map(|d| d.to_string())),
            show(self.truncation.map(|d| d.to_string())),
            show(self.mode.map(|d| d.to_string())),
            show(self.prime.map(|d| d.to_string())),
        )
    }
}

pub fn inputs_digest(command: Command, manifest_text: Option<&str>, opts: &Options) -> String {
    let mut h = Sha256::new();
    h.update(command.name().as_bytes());
    h.update(b"\n");
    h.update(opts.normalized().as_bytes());
    h.update(b"\n");
    if let Some(t) = manifest_text {
        h.update(t.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses the manifest text (when given) and runs the command.
pub fn run_text(command: Command, manifest_text: Option<&str>, opts: &Options) -> Result<Report> {
    let manifest = manifest_text.map(parse_manifest).transpose()?;
    if manifest.is_none() && command.needs_manifest() {
        return Err(Error::Manifest(format!("{command} needs --manifest")));
    }
    let report = Report::new(command.name(), inputs_digest(command, manifest_text, opts));
    run(command, manifest.as_ref(), opts, report)
}

/// Dispatches to the owning module; `report` arrives with command and digest set.
pub fn run(command: Command, m: Option<&Manifest>, opts: &Options, mut report: Report) -> Result<Report> {
    let r = &mut report;
    match (command, m) {
        (Command::DemoTorProbe, _) => demo_tor_probe(r, opts)?,
        (_, None) => return Err(Error::Manifest(format!("{command} needs --manifest"))),
        (Command::Validate, Some(m)) => validate(r, m)?,
        (Command::Homology, Some(m)) => homology(r, m, opts)?,
        (Command::Bredon, Some(m)) => bredon(r, m, opts)?,
        (Command::Tor, Some(m)) => tor(r, m, opts)?,
        (Command::Tensor, Some(m)) => tensor(r, m)?,
        (Command::Hom, Some(m)) => hom(r, m)?,
        (Command::VerifyTheorem, Some(m)) => theorem(r, m, opts)?,
        (Command::DemoInterchange, Some(m)) => demo_interchange(r, m, opts)?,
        (Command::DemoClassifying, Some(m)) => demo_classifying(r, m, opts)?,
        (Command::BorelCheck, Some(m)) => borel(r, m, opts)?,
    }
    Ok(report)
}

fn missing(command: &str, what: &str) -> Error {
    Error::Manifest(format!("{command} needs {what}"))
}

fn validate(r: &mut Report, m: &Manifest) -> Result<()> {
    for (name, g) in &m.groups {
        r.verdict(format!("group.{name}"), true, format!("order {}", g.order()));
    }
    for (name, f) in &m.families {
        r.verdict(format!("family.{name}"), true, format!("{} subgroups", f.members.len()));
    }
    for (name, c) in &m.categories {
        let v = validate_category(&c.cat.to_data());
        r.verdict(
            format!("category.{name}"),
            v.valid,
            v.witness.unwrap_or_else(|| format!("{} objects, {} morphisms", c.cat.num_objects(), c.cat.num_morphisms())),
        );
    }
    for (name, x) in &m.modules {
        let v = validate_module(x);
        r.verdict(format!("module.{name}"), v.is_ok(), v.err().map_or_else(|| "functorial".to_string(), |e| e.to_string()));
    }
    for (name, c) in &m.complexes {
        let v = c.validate();
        r.verdict(format!("complex.{name}"), v.is_ok(), v.err().map_or_else(|| format!("degrees {}..={}", c.lo, c.hi()), |e| e.to_string()));
    }
    for (name, x) in &m.icws {
        r.verdict(format!("icw.{name}"), true, format!("cells {:?}", x.cell_counts()));
    }
    for (name, x) in &m.gcws {
        r.verdict(format!("gcw.{name}"), true, format!("orbit cells {:?}", x.cells.iter().map(Vec::len).collect::<Vec<_>>()));
    }
    for (name, e) in &m.bifunctors {
        let v = e.validate();
        r.verdict(format!("bifunctor.{name}"), v.is_ok(), v.err().map_or_else(|| format!("degrees {}..={}", e.lo, e.hi()), |e| e.to_string()));
    }
    for name in m.instances.keys() {
        r.verdict(format!("instance.{name}"), true, "references resolve");
    }
    for (name, s) in &m.sequences {
        let v = s.validate();
        r.verdict(format!("sequences.{name}"), v.is_ok(), v.err().map_or_else(|| "consistent tail tags".to_string(), |e| e.to_string()));
    }
    Ok(())
}

fn degrees_of(c: &PlainChainComplex, only: Option<i64>) -> Vec<i64> {
    match only {
        Some(p) => vec![p],
        None if c.is_empty() => Vec::new(),
        None => c.degrees().collect(),
    }
}

/// Homology groups plus the check that the Euler characteristic of chains
/// matches that of homology.
fn plain_homology(r: &mut Report, name: &str, c: &PlainChainComplex, only: Option<i64>) -> Result<()> {
    for p in degrees_of(c, only) {
        r.group(format!("{name} H_{p}"), &c.homology(p)?.bare());
    }
    let (chains, homology) = (c.euler_characteristic(), c.homology_euler_characteristic()?);
    r.verdict(format!("{name} euler characteristic"), chains == homology, format!("chains {chains}, homology {homology}"));
    Ok(())
}

fn evaluations(r: &mut Report, prefix: &str, c: &CatChainComplex, only: Option<i64>) -> Result<()> {
    for o in 0..c.base.num_objects() {
        plain_homology(r, &format!("{prefix}@{}", c.base.object_label(o)), &c.evaluate(o), only)?;
    }
    Ok(())
}

fn homology(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    if m.complexes.is_empty() && m.icws.is_empty() && m.gcws.is_empty() {
        return Err(missing("homology", "one of the sections complex, icw, gcw"));
    }
    for (name, c) in &m.complexes {
        evaluations(r, &format!("complex.{name}"), c, opts.degree)?;
    }
    for (name, x) in &m.icws {
        evaluations(r, &format!("icw.{name}"), &cellular_chain_complex(x)?, opts.degree)?;
    }
    for (name, x) in &m.gcws {
        let base = Arc::new(x.group.as_category());
        plain_homology(r, &format!("gcw.{name} underlying"), &underlying_chains(x, &base)?.evaluate(0), opts.degree)?;
    }
    Ok(())
}

/// Orbit categories declared in the manifest over which `x` has its isotropy.
fn orbit_for<'a>(m: &'a Manifest, x: &GCWComplex, base: &crate::fincat::FinCategory) -> Option<&'a OrbitCategory> {
    m.categories.values().filter_map(|c| c.orbit.as_ref()).find(|or| {
        *or.cat == *base && *or.group == *x.group && x.isotropy().iter().all(|h| or.family.contains(h))
    })
}

fn bredon(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    let mut pairs = 0;
    for (xn, x) in &m.gcws {
        for (mn, module) in &m.modules {
            if module.variance != Variance::Covariant {
                continue;
            }
            let Some(or) = orbit_for(m, x, &module.base) else { continue };
            pairs += 1;
            let c = bredon_chains(x, or, module)?;
            let only = opts.degree;
            let name = format!("bredon({xn}; {mn})");
            let top = x.dimension().unwrap_or(0) as i64;
            for p in only.map_or_else(|| (0..=top).collect(), |p| vec![p]) {
                r.group(format!("{name} H_{p}"), &c.homology(p)?.bare());
            }
            let (chains, homology) = (c.euler_characteristic(), c.homology_euler_characteristic()?);
            r.verdict(format!("{name} euler characteristic"), chains == homology, format!("chains {chains}, homology {homology}"));
        }
    }
    if pairs == 0 {
        return Err(missing("bredon", "a gcw and a covariant module over an orbit category containing its isotropy"));
    }
    Ok(())
}

/// Ordered pairs of modules on one base with the given variances.
fn pairs(m: &Manifest, left: Variance, right: Variance) -> Vec<(&str, &CatModule, &str, &CatModule)> {
    let mut out = Vec::new();
    for (a, x) in &m.modules {
        for (b, y) in &m.modules {
            if x.variance == left && y.variance == right && x.base == y.base {
                out.push((a.as_str(), x, b.as_str(), y));
            }
        }
    }
    out
}

fn tor(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    let ps: Vec<usize> = match opts.degree {
        Some(p) if p < 0 => return Err(Error::Manifest("Tor degrees are nonnegative".into())),
        Some(p) => vec![p as usize],
        None => (0..=2).collect(),
    };
    let ps_list = pairs(m, Variance::Contravariant, Variance::Covariant);
    if ps_list.is_empty() {
        return Err(missing("tor", "a contravariant and a covariant module over the same category"));
    }
    for (a, x, b, y) in ps_list {
        for &p in &ps {
            let left = tor_via(x, y, p, TorSide::Left)?;
            let right = tor_via(x, y, p, TorSide::Right)?;
            let name = format!("Tor_{p}({a}, {b})");
            r.group(&name, &left);
            r.verdict(format!("{name} balanced"), left == right, format!("resolving {a}: {left}; resolving {b}: {right}"));
            if p == 0 {
                let t = tensor_over_cat(x, y)?.bare();
                r.verdict(format!("{name} = tensor"), t == left, format!("tensor {t}"));
            }
        }
    }
    Ok(())
}

fn tensor(r: &mut Report, m: &Manifest) -> Result<()> {
    let ps = pairs(m, Variance::Contravariant, Variance::Covariant);
    if ps.is_empty() {
        return Err(missing("tensor", "a contravariant and a covariant module over the same category"));
    }
    for (a, x, b, y) in ps {
        let t = tensor_over_cat(x, y)?.bare();
        let name = format!("{a} ⊗ {b}");
        r.group(&name, &t);
        let via = tor_via(x, y, 0, TorSide::Right)?;
        r.verdict(format!("{name} = Tor_0"), via == t, format!("Tor_0 resolving {b}: {via}"));
    }
    Ok(())
}

fn hom(r: &mut Report, m: &Manifest) -> Result<()> {
    let mut count = 0;
    for v in [Variance::Covariant, Variance::Contravariant] {
        for (a, x, b, y) in pairs(m, v, v) {
            count += 1;
            let h = hom_over_cat(x, y)?.bare();
            let name = format!("hom({a}, {b})");
            r.group(&name, &h);
            if let Some(marker) = &x.marker {
                let yoneda = FpAbGroup::direct_sum(&marker.generators.iter().map(|&o| y.values[o].bare()).collect::<Vec<_>>()).bare();
                r.verdict(format!("{name} yoneda"), yoneda == h, format!("sum of {b} at the generators: {yoneda}"));
            }
        }
    }
    if count == 0 {
        return Err(missing("hom", "two modules of the same variance over the same category"));
    }
    Ok(())
}

fn theorem(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    if m.instances.is_empty() {
        return Err(missing("verify-theorem", "the instance section"));
    }
    for (name, inst) in &m.instances {
        let mut inst = inst.clone();
        if let Some(n) = opts.degree {
            inst.n = n;
        }
        let conclusion = opts.mode.unwrap_or(inst.mode);
        let rep = verify_theorem(&inst, conclusion)?;
        let h = &rep.hypotheses;
        let support = h.a.support.map_or_else(|| "empty".to_string(), |(lo, hi)| format!("degrees {lo}..={hi}"));
        r.verdict(format!("{name} (A) support"), h.a.passes, format!("d = {}, support {support}, free {}", inst.d, h.a.d_free));
        if let Some((k, why)) = &h.a.witness {
            r.witness(format!("{name} (A)"), format!("degree {k}: {why}"));
        }
        r.verdict(format!("{name} (B) connectivity"), h.b.passes, format!("N = {}, {} evaluations checked", inst.big_n, h.b.checked));
        if let Some((i, j, q, g)) = &h.b.witness {
            r.witness(format!("{name} (B)"), format!("H_{q}(E({i}, {j})) = {g}"));
        }
        r.verdict(
            format!("{name} (C) isotropy"),
            h.c.passes,
            format!("{} orbit types, largest isotropy order {}", h.c.orbit_types, h.c.max_isotropy_order),
        );
        if let Some(w) = &h.c.outside_family {
            r.witness(format!("{name} (C)"), format!("isotropy {w} outside the family"));
        }
        let ann = h.d.annihilator.as_ref().map_or_else(String::new, |a| format!(", annihilator {a}"));
        r.verdict(format!("{name} (D) {}", h.mode), h.d.passes, format!("through degree {}{ann}; {}", h.d.top_degree, h.d.note));
        for (obj, q, g) in &h.d.groups {
            r.group(format!("{name} (D) {obj} degree {q}"), g);
        }
        for d in &rep.comparison.degrees {
            let ok = match (&d.class, conclusion) {
                (ComparisonClass::Isomorphism, _) => true,
                (ComparisonClass::AlmostIsomorphism { .. }, FgMode::Almost) => true,
                _ => false,
            };
            r.verdict(format!("{name} H_{}(t) {conclusion}", d.p), ok, d.class.to_string());
            r.group(format!("{name} H_{} source", d.p), &d.source);
            r.group(format!("{name} H_{} target", d.p), &d.target);
            if !ok {
                r.witness(format!("{name} H_{}(t)", d.p), format!("kernel {}, cokernel {}", d.kernel, d.cokernel));
            }
        }
        for (k, w) in rep.comparison.warnings.iter().enumerate() {
            r.witness(format!("{name} warning {k}"), w.clone());
        }
    }
    Ok(())
}

fn demo_interchange(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    if m.sequences.is_empty() {
        return Err(missing("demo-interchange", "the sequences section"));
    }
    let k = opts.truncation.unwrap_or(6);
    for (name, spec) in &m.sequences {
        let rep = interchange_criterion(spec, k, k)?;
        r.verdict(format!("{name} truncations injective"), rep.all_injective, format!("windows up to {k}x{k}"));
        r.verdict(format!("{name} windows agree"), rep.agrees, format!("symbolic {:?}: {}", rep.symbolic.verdict, rep.symbolic.reason));
        if let Some(w) = rep.windows.last() {
            r.group(format!("{name} window {}x{} source", w.rows, w.cols), &w.source);
            r.group(format!("{name} window {}x{} target", w.rows, w.cols), &w.target);
        }
        r.witness(format!("{name} symbolic"), format!("{:?}", rep.symbolic.verdict));
    }
    Ok(())
}

fn demo_tor_probe(r: &mut Report, opts: &Options) -> Result<()> {
    let p = opts.prime.unwrap_or(2);
    let k = opts.truncation.unwrap_or(8);
    if !(2..=TOR_PROBE_BOUND).contains(&k) {
        return Err(Error::Manifest(format!("demo-tor-probe needs a truncation in 2..={TOR_PROBE_BOUND}")));
    }
    let pb = BigInt::from(p);
    for n in 2..=k {
        let mut order_ok = true;
        let mut iso_ok = true;
        let mut mismatched = Vec::new();
        for mm in 2..=k {
            let rep = tor_interchange_probe(p, mm, n)?;
            order_ok &= rep.delta_order == num_traits::pow(pb.clone(), n);
            iso_ok &= rep.finite_map_iso;
            if rep.delta_in_block != (mm >= n) {
                mismatched.push(mm);
            }
        }
        r.verdict(format!("delta_{n} order {p}^{n}"), order_ok, format!("M = 2..={k}"));
        r.verdict(format!("delta_{n} finite interchange iso"), iso_ok, format!("M = 2..={k}"));
        r.verdict(format!("delta_{n} in block iff M >= {n}"), mismatched.is_empty(), format!("M = 2..={k}"));
        if !mismatched.is_empty() {
            r.witness(format!("delta_{n} membership"), format!("wrong at M = {mismatched:?}"));
        }
    }
    Ok(())
}

fn demo_classifying(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    if m.icws.is_empty() {
        return Err(missing("demo-classifying", "the icw section"));
    }
    for (name, x) in &m.icws {
        let x: CatCWComplex = match (&m.raw.icw[name], opts.truncation) {
            (IcwDef::Classifying { shape, .. }, Some(k)) => classifying_model(shape.parse()?, k)?,
            _ => x.clone(),
        };
        let dim = x.dimension().unwrap_or(0);
        let bound = x.valid_degree.unwrap_or(dim);
        let rep = contractibility_check(&x, bound)?;
        let counts = x.cell_counts();
        r.witness(format!("{name} cells"), counts.iter().map(usize::to_string).collect::<Vec<_>>().join(", "));
        r.verdict(
            format!("{name} contractible through {bound}"),
            rep.passes,
            format!("{} objects, dimension {dim}", x.base.num_objects()),
        );
        if let Some((obj, p)) = rep.witness() {
            r.witness(format!("{name} failure"), format!("object {obj}, degree {p}"));
        }
    }
    Ok(())
}

fn borel(r: &mut Report, m: &Manifest, opts: &Options) -> Result<()> {
    if m.gcws.is_empty() {
        return Err(missing("borel-check", "the gcw section"));
    }
    let k = opts.truncation.unwrap_or(6);
    for (name, x) in &m.gcws {
        let rep = borel_vs_quotient_check(x, k, &[])?;
        for d in rep.degrees.iter().filter(|d| opts.degree.is_none_or(|p| p == d.p)) {
            r.verdict(
                format!("{name} H_{} almost iso", d.p),
                d.annihilated,
                format!("kernel {}, cokernel {}, d(p) = {}", d.kernel, d.cokernel, d.annihilator),
            );
            r.group(format!("{name} H_{} borel", d.p), &d.borel);
            r.group(format!("{name} H_{} quotient", d.p), &d.quotient);
        }
        r.witness(format!("{name} valid range"), format!("bar degree {k}, degrees 0..={}", rep.valid_up_to));
    }
    Ok(())
}
