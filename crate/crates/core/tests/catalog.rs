use rbsuper::catalog::{catalog_get, catalog_verify_all, ids};
use rbsuper::format::{parse_operator_file, render_algebra, render_operator, AlgebraFile};
use rbsuper::operators::verify_family;

#[test]
fn rendered_entries_reparse_to_the_same_data() {
    for id in ids() {
        let e = catalog_get(id).unwrap();
        let alg = e.algebra();
        let text = render_algebra(alg, e.file.module.as_ref());
        let back = AlgebraFile::parse(&text).unwrap_or_else(|err| panic!("{}: {}\n{}", id, err, text));
        assert_eq!(back.algebra.tables, alg.tables, "{}", id);
        assert_eq!(back.algebra.basis, alg.basis, "{}", id);
        assert_eq!(back.algebra.parameters, alg.parameters, "{}", id);
        for fam in &e.families {
            let op = render_operator(fam);
            let parsed = parse_operator_file(&op, &back.algebra, None).unwrap_or_else(|err| panic!("{} {}: {}\n{}", id, fam.id, err, op));
            assert_eq!(parsed.len(), 1);
            let f = &parsed[0];
            assert_eq!(f.map.entries(), fam.map.entries(), "{} {}", id, fam.id);
            assert_eq!(f.weight, fam.weight);
            assert_eq!(f.constraints, fam.constraints, "{} {}", id, fam.id);
            let a = verify_family(alg, fam, None).unwrap().passed();
            let b = verify_family(&back.algebra, f, None).unwrap().passed();
            assert_eq!(a, b, "{} {}", id, fam.id);
        }
    }
}

#[test]
fn parameters_without_a_pivot_cell() {
    // each of these has a parameter that only enters nonlinearly or is absorbed into another entry
    let mut missing = Vec::new();
    for id in ids() {
        for fam in &catalog_get(id).unwrap().families {
            if !fam.pivots_cover_parameters() {
                missing.push(format!("{} {}", id, fam.id));
            }
        }
    }
    assert_eq!(missing, ["osp12 R23", "osp12 R29", "C_2h_5 R3"]);
}

#[test]
fn table_sizes() {
    let count = |f: &str| catalog_verify_all(f, None).unwrap();
    let b = count("B_*");
    assert_eq!((b.algebras, b.checked), (10, 11));
    assert_eq!(count("osp12").checked, 31);
    let all = count("*");
    assert_eq!(all.checked, 273);
}

#[test]
fn errata_lines_are_json() {
    let dir = std::env::temp_dir().join(format!("rbsuper-errata-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("errata.jsonl");
    let sum = catalog_verify_all("C_6_*", Some(&path)).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), sum.errata.len() + 1);
    assert_eq!(lines.last().unwrap()["summary"]["failed"], sum.failed);
    std::fs::remove_dir_all(&dir).unwrap();
}
