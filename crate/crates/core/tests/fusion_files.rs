use qfree_core::fusion::{
    check_axioms, load_fusion_ring, rep_ring_from_character_table, CharacterTable, FusionError, FusionRules,
};
use qfree_core::matrix_cqg::{builtin_catalog, load_rep_file, RepFile};

fn path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn z2_file_satisfies_axioms() {
    let ring = load_fusion_ring(path("z2.json")).unwrap();
    assert_eq!(ring.len(), 2);
    assert!(check_axioms(&ring, &ring.window(2)).all_passed());
    let one = ring.parse_label("1").unwrap();
    assert_eq!(ring.fuse(&one, &one).unwrap().support().next(), Some(&ring.trivial()));
}

#[test]
fn s3_table_file_matches_character_ring() {
    let from_table = load_fusion_ring(path("s3_rep_ring.json")).unwrap();
    let text = std::fs::read_to_string(path("s3_chars.json")).unwrap();
    let from_chars = rep_ring_from_character_table("s3", &CharacterTable::from_json(&text).unwrap()).unwrap();
    let from_catalog = builtin_catalog("S3").unwrap().fusion_ring().unwrap();
    for u in 0..3 {
        for v in 0..3 {
            let a = from_table.fuse(&u, &v).unwrap();
            assert_eq!(a, from_chars.fuse(&u, &v).unwrap());
            assert_eq!(a, from_catalog.fuse(&u, &v).unwrap());
        }
    }
}

#[test]
fn q8_character_table_has_one_two_dimensional_irrep() {
    let text = std::fs::read_to_string(path("q8_chars.json")).unwrap();
    let ring = rep_ring_from_character_table("q8", &CharacterTable::from_json(&text).unwrap()).unwrap();
    let dims: Vec<usize> = ring.window(5).iter().map(|u| ring.dim(u).unwrap()).collect();
    assert_eq!(dims, [1, 1, 1, 1, 2]);
    let std = ring.parse_label("std").unwrap();
    assert_eq!(ring.fuse(&std, &std).unwrap().total(), 4);
}

#[test]
fn broken_files_are_rejected() {
    let dim = load_fusion_ring(path("broken_dimension.json")).unwrap_err();
    assert!(matches!(dim, FusionError::Axiom { .. }), "{dim}");
    assert!(load_fusion_ring(path("broken_conj.json")).is_err());
    assert!(load_fusion_ring(path("missing.json")).is_err());
}

#[test]
fn representation_files_round_trip() {
    let dir = std::env::temp_dir().join(format!("qfree-rep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("q8.json");
    let cat = builtin_catalog("Q8").unwrap();
    std::fs::write(&file, serde_json::to_string(&RepFile::from_catalog(&cat)).unwrap()).unwrap();
    let back = load_rep_file(&file).unwrap();
    assert_eq!(back.dims(), cat.dims());
    assert!(back.schur_orthogonality_residual() < 1e-10);
    std::fs::remove_dir_all(dir).unwrap();
}
