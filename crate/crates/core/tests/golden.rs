use polyrank::constructs::{dfz_x2, fano_x1, x1_ground, x2_ground};
use polyrank::format::read_rankvec;
use polyrank::gf::Field;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn fano_over_gf2_matches_golden() {
    let want = read_rankvec(&golden("fano_gf2.rankvec")).unwrap();
    let got = fano_x1(&Field::prime(2).unwrap()).rank_vector();
    assert_eq!(got.values(), want.values());
    assert_eq!(got.ground(), &x1_ground());
}

#[test]
fn x2_over_gf3_matches_golden() {
    let want = read_rankvec(&golden("x2_gf3.rankvec")).unwrap();
    let got = dfz_x2(&Field::prime(3).unwrap()).rank_vector();
    assert_eq!(got.values(), want.values());
    assert_eq!(got.ground(), &x2_ground());
}

#[test]
fn goldens_differ_in_the_other_characteristic() {
    let fano3 = fano_x1(&Field::prime(3).unwrap()).rank_vector();
    let x2_2 = dfz_x2(&Field::prime(2).unwrap()).rank_vector();
    assert_ne!(
        fano3.values(),
        read_rankvec(&golden("fano_gf2.rankvec")).unwrap().values()
    );
    assert_ne!(
        x2_2.values(),
        read_rankvec(&golden("x2_gf3.rankvec")).unwrap().values()
    );
}
