//! Shipped JSON fixtures agree bit-exactly with the in-code constructions.
//! Run with `YDCAT_WRITE_FIXTURES=1` to regenerate them.

use std::path::PathBuf;

use ydcat::hopf::{
    function_algebra, hopf_from_json, hopf_to_json, kac_paljutkin, load_hopf, load_subgroup, subgroup_to_json,
    validate_hopf, FiniteGroup, HopfAlgebraData, SubgroupSurjection,
};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn algebras() -> Vec<(&'static str, HopfAlgebraData)> {
    vec![
        ("trivial", function_algebra(&FiniteGroup::trivial())),
        ("z2", function_algebra(&FiniteGroup::cyclic(2))),
        ("z3", function_algebra(&FiniteGroup::cyclic(3))),
        ("s3", function_algebra(&FiniteGroup::symmetric3())),
        ("kac_paljutkin", kac_paljutkin()),
    ]
}

fn subgroups() -> Vec<(&'static str, SubgroupSurjection)> {
    let g = FiniteGroup::symmetric3();
    [("trivial", vec![0]), ("z2", vec![0, 1]), ("a3", vec![0, 3, 4]), ("s3", vec![0, 1, 2, 3, 4, 5])]
        .into_iter()
        .map(|(name, elems)| (name, SubgroupSurjection::restriction(name, &g, &elems).unwrap()))
        .collect()
}

fn write_mode() -> bool {
    std::env::var_os("YDCAT_WRITE_FIXTURES").is_some()
}

#[test]
fn hopf_fixtures_match_builders() {
    for (name, h) in algebras() {
        let path = dir().join(format!("{name}.json"));
        if write_mode() {
            std::fs::write(&path, hopf_to_json(&h)).unwrap();
        }
        let loaded = load_hopf(&path).unwrap();
        assert_eq!(loaded, h, "{name}");
        assert!(validate_hopf(&loaded, 1e-10).unwrap().passed(), "{name}");
    }
}

#[test]
fn subgroup_fixtures_match_builders() {
    for (name, sub) in subgroups() {
        let target = format!("s3_sub_{name}_target.json");
        if write_mode() {
            std::fs::write(dir().join(&target), hopf_to_json(&sub.target)).unwrap();
            let text = subgroup_to_json(&sub, "s3.json", &target);
            std::fs::write(dir().join(format!("s3_sub_{name}.json")), text).unwrap();
        }
        let loaded = load_subgroup(dir().join(format!("s3_sub_{name}.json"))).unwrap();
        assert_eq!(*loaded.source, *sub.source, "{name}");
        assert_eq!(*loaded.target, *sub.target, "{name}");
        assert_eq!(loaded.map, sub.map, "{name}");
        assert!(loaded.validate(1e-10).unwrap().passed(), "{name}");
    }
}

#[test]
fn encode_decode_is_exact_for_every_fixture() {
    for entry in std::fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        if text.contains("\"map\"") {
            continue;
        }
        let h = hopf_from_json(&text, &path.display().to_string()).unwrap();
        assert_eq!(hopf_to_json(&h), text, "{}", path.display());
    }
}

#[test]
fn malformed_fixture_reports_its_path() {
    let err = hopf_from_json("{\"dim\": 2", "broken.json").unwrap_err();
    assert!(err.to_string().contains("broken.json"), "{err}");
}
