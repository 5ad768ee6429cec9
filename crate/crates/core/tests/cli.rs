use std::path::{Path, PathBuf};
use std::process::Command as Proc;

use orbifunctor::cli::*;
use orbifunctor::fincat::{standard_category, StandardKind};
use orbifunctor::verify::{neither_instance, FgMode, TheoremSource};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn run(cmd: &str, text: Option<&str>, opts: &Options) -> Report {
    run_text(cmd.parse().unwrap(), text, opts).unwrap_or_else(|e| panic!("{cmd}: {e}"))
}

fn group<'a>(r: &'a Report, name: &str) -> &'a str {
    &r.groups.iter().find(|g| g.name == name).unwrap_or_else(|| panic!("no group {name} in {:?}", r.groups)).group
}

fn verdict(r: &Report, name: &str) -> bool {
    r.verdicts.iter().find(|v| v.name == name).unwrap_or_else(|| panic!("no verdict {name} in {:?}", r.verdicts)).passes
}

/// The defective instance written out explicitly, with the orbit category
/// declared by kind so the resolver rebuilds it.
fn neither_manifest() -> String {
    let inst = neither_instance().unwrap();
    let mut raw = RawManifest::empty();
    raw.group.insert("z2".into(), GroupDef::Cyclic { order: Dec(2) });
    raw.family.insert("all".into(), FamilyDef::All { group: "z2".into() });
    raw.category.insert("or".into(), CategoryDef::Orbit { family: "all".into() });
    raw.category.insert("n1".into(), category_def(&inst.index).unwrap());
    raw.complex.insert("D".into(), complex_def("n1", &inst.d_complex));
    let TheoremSource::Chains(c) = &inst.source else { unreachable!() };
    raw.complex.insert("C".into(), complex_def("or", c));
    raw.bifunctor.insert("E".into(), bifunctor_def("n1", "or", &inst.e));
    raw.instance.insert(
        "neither".into(),
        InstanceDef {
            index_complex: "D".into(),
            orbit: "or".into(),
            source: SourceDef::Chains("C".into()),
            coefficients: "E".into(),
            d: Dec(inst.d),
            n: Dec(inst.n),
            big_n: Dec(inst.big_n),
            mode: "strict".into(),
            e_exact_through: None,
        },
    );
    to_manifest_text(&raw)
}

#[test]
fn minimal_manifest_parses() {
    let m = parse_manifest(r#"{ "version": "1" }"#).unwrap();
    assert!(m.groups.is_empty() && m.instances.is_empty());
}

#[test]
fn unknown_section_is_named() {
    let e = parse_manifest(r#"{ "version": "1", "modules": {} }"#).unwrap_err().to_string();
    assert!(e.contains("unknown section `modules`"), "{e}");
}

#[test]
fn syntax_errors_carry_a_position() {
    let e = parse_manifest("{\n  \"version\": \"1\",\n  \"group\": {,\n}").unwrap_err().to_string();
    assert!(e.contains("line 3"), "{e}");
}

#[test]
fn wrong_version_is_rejected() {
    assert!(parse_manifest(r#"{ "version": "2" }"#).is_err());
}

#[test]
fn dangling_references_are_reported() {
    let text = r#"{ "version": "1", "family": { "f": { "kind": "all", "group": "nope" } } }"#;
    let e = parse_manifest(text).unwrap_err().to_string();
    assert!(e.contains("dangling reference") && e.contains("nope"), "{e}");
}

#[test]
fn circular_references_are_reported() {
    let text = r#"{ "version": "1", "group": {
        "a": { "kind": "product", "factors": ["b"] },
        "b": { "kind": "product", "factors": ["a"] } } }"#;
    let e = parse_manifest(text).unwrap_err().to_string();
    assert!(e.contains("circular"), "{e}");
}

#[test]
fn integers_must_be_decimal_strings() {
    let text = r#"{ "version": "1", "group": { "a": { "kind": "cyclic", "order": 2 } } }"#;
    assert!(parse_manifest(text).is_err());
    let text = r#"{ "version": "1", "group": { "a": { "kind": "cyclic", "order": "0x2" } } }"#;
    assert!(parse_manifest(text).is_err());
}

#[test]
fn non_functorial_modules_are_rejected() {
    let text = r#"{ "version": "1",
        "group": { "z2": { "kind": "cyclic", "order": "2" } },
        "category": { "bz2": { "kind": "group", "group": "z2" } },
        "module": { "m": { "kind": "explicit", "category": "bz2", "variance": "covariant",
            "values": [ { "rank": "1", "torsion": [] } ],
            "action": { "1": [["-1"]] } } } }"#;
    assert!(parse_manifest(text).is_ok());
    assert!(parse_manifest(&text.replace(r#"[["-1"]]"#, r#"[["2"]]"#)).is_err());
}

#[test]
fn fixtures_validate() {
    for name in ["point.json", "z2_reflection_sphere.json", "desk.json", "s3_desk.json", "classifying.json"] {
        let r = run("validate", Some(&read(name)), &Options::default());
        assert!(r.passes() && !r.verdicts.is_empty(), "{name}");
    }
}

#[test]
fn bredon_of_a_point_is_the_coefficients_at_g_mod_g() {
    let r = run("bredon", Some(&read("point.json")), &Options::default());
    assert_eq!(group(&r, "bredon(pt; Z) H_0"), "Z");
    assert!(r.passes());
}

#[test]
fn bredon_of_the_reflection_sphere() {
    let r = run("bredon", Some(&read("z2_reflection_sphere.json")), &Options::default());
    let mut seen = 0;
    for g in &r.groups {
        if g.name.ends_with("H_0") {
            assert!(g.group == "Z" || g.group == "Z/2", "{g:?}");
            seen += 1;
        } else {
            assert_eq!(g.group, "0", "{g:?}");
        }
    }
    assert!(seen >= 2);
}

#[test]
fn tor_and_tensor_agree() {
    let text = read("z2_reflection_sphere.json");
    let tor = run("tor", Some(&text), &Options::default());
    let tensor = run("tensor", Some(&text), &Options::default());
    let hom = run("hom", Some(&text), &Options::default());
    assert!(tor.passes() && tensor.passes() && hom.passes());
    assert!(tor.verdicts.iter().any(|v| v.name.ends_with("= tensor")));
    assert!(hom.verdicts.iter().any(|v| v.name.ends_with("yoneda")));
}

#[test]
fn desk_instance_is_an_isomorphism_in_every_degree() {
    let r = run("verify-theorem", Some(&read("desk.json")), &Options::default());
    assert!(r.passes(), "{}", r.render_table());
    let iso: Vec<_> = r.verdicts.iter().filter(|v| v.name.contains("H_")).collect();
    assert!(!iso.is_empty());
    assert!(iso.iter().all(|v| v.detail == "ISO"), "{iso:?}");
}

#[test]
fn degree_and_mode_flags_reach_verify_theorem() {
    let opts = Options { degree: Some(1), mode: Some(FgMode::Almost), ..Options::default() };
    let r = run("verify-theorem", Some(&read("desk.json")), &opts);
    assert!(r.passes(), "{}", r.render_table());
    assert!(r.verdicts.iter().any(|v| v.name.contains("almost")), "{:?}", r.verdicts);
}

#[test]
fn defective_instance_fails_verification() {
    let r = run("verify-theorem", Some(&neither_manifest()), &Options::default());
    assert!(!r.passes(), "{}", r.render_table());
    assert_eq!(r.exit_code(), EXIT_VERDICT_FAILURE);
}

#[test]
fn classifying_models_of_rf() {
    let opts = Options { truncation: Some(3), ..Options::default() };
    let r = run("demo-classifying", Some(&read("classifying.json")), &opts);
    assert!(r.passes(), "{}", r.render_table());
    let cells = r.witnesses.iter().find(|w| w.name == "e_rf cells").unwrap();
    assert_eq!(cells.data, "4, 6, 2");
}

#[test]
fn tor_probe_needs_no_manifest() {
    let r = run("demo-tor-probe", None, &Options { prime: Some(2), truncation: Some(6), ..Options::default() });
    assert!(r.passes());
    assert!(verdict(&r, "delta_3 in block iff M >= 3"));
    assert!(run_text(Command::Validate, None, &Options::default()).is_err());
}

#[test]
fn interchange_and_borel_demos_pass() {
    let text = read("point.json");
    let r = run("borel-check", Some(&text), &Options { truncation: Some(4), ..Options::default() });
    assert!(r.passes());
    assert_eq!(group(&r, "pt H_0 borel"), "Z");
    let text = r#"{ "version": "1", "sequences": { "s": {
        "m": { "prefix": ["0", "1"], "tail": "strictly_increasing_unbounded" },
        "n": { "prefix": ["0", "1"], "tail": "strictly_increasing_unbounded" },
        "profile": { "values": { "0": { "rank": "1", "torsion": [] } }, "tail": { "bounded_below": "0" } },
        "p": "0" } } }"#;
    let r = run("demo-interchange", Some(text), &Options { truncation: Some(4), ..Options::default() });
    assert!(verdict(&r, "s truncations injective"), "{}", r.render_table());
}

#[test]
fn reports_are_byte_stable() {
    let text = read("desk.json");
    let a = run("verify-theorem", Some(&text), &Options::default()).to_json();
    let b = run("verify-theorem", Some(&text), &Options::default()).to_json();
    assert_eq!(a, b);
    let back: Report = serde_json::from_str(&a).unwrap();
    assert_eq!(back.to_json(), a);
    let other = run("verify-theorem", Some(&text), &Options { degree: Some(0), ..Options::default() });
    assert_ne!(other.inputs_digest, back.inputs_digest);
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_orbifunctor")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn binary_exit_codes() {
    let desk = fixture("desk.json");
    let (code, stdout, stderr) = binary(&["verify-theorem", "--manifest", desk.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{stdout}{stderr}");
    assert!(stdout.contains("verdicts pass") && stderr.contains("elapsed"));

    let dir = std::env::temp_dir().join(format!("orbifunctor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("neither.json");
    std::fs::write(&bad, neither_manifest()).unwrap();
    let report = dir.join("report.json");
    let (code, _, _) = binary(&["verify-theorem", "--manifest", bad.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_VERDICT_FAILURE);
    let written: Report = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(!written.passes());

    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{ \"version\": \"1\", \"bogus\": {} }").unwrap();
    let (code, _, stderr) = binary(&["validate", "--manifest", broken.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(stderr.contains("bogus"), "{stderr}");
    assert_eq!(binary(&["frobnicate"]).0, EXIT_INPUT_ERROR);
    assert_eq!(binary(&["validate"]).0, EXIT_INPUT_ERROR);
    assert_eq!(binary(&["validate", "--manifest", dir.join("missing.json").to_str().unwrap()]).0, EXIT_INPUT_ERROR);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn standard_categories_export_with_their_labels() {
    let c = standard_category(StandardKind::RF, 2);
    let text = {
        let mut raw = RawManifest::empty();
        raw.category.insert("rf".into(), category_def(&c).unwrap());
        to_manifest_text(&raw)
    };
    assert!(text.contains(&format!("{:?}", c.morphism_label(c.num_morphisms() - 1))), "{text}");
    assert_eq!(*parse_manifest(&text).unwrap().categories["rf"].cat, c);
}
