use num_bigint::BigUint;
use proptest::prelude::*;
use subspace_codes::document::{Code, CodeSpec};
use subspace_codes::ff::{BaseField, FieldTower, MessageIndex};
use subspace_codes::isometry::{apply_isometry, SemiLinearIsometry};
use subspace_codes::linalg::Matrix;
use subspace_codes::orbit::RetrieveInput;
use subspace_codes::spread::{Convention, SpreadCode};
use subspace_codes::subspace::subspace_distance;

fn build(json: &str) -> Code {
    CodeSpec::from_json(json).unwrap().build().unwrap()
}

fn spread(p: u32, r: usize, k: usize, m: usize) -> SpreadCode {
    let tower = FieldTower::new(BaseField::new(p, r, None).unwrap(), None, k).unwrap();
    SpreadCode::new(tower, m).unwrap()
}

#[test]
fn spread_documents_encode_like_direct_construction() {
    let Code::Spread(from_doc) =
        build(r#"{"family": "desarguesian_spread", "p": 3, "k": 2, "m": 3}"#)
    else {
        panic!("wrong family");
    };
    let direct = spread(3, 1, 2, 3);
    assert_eq!(from_doc.size(), direct.size());
    for i in [0u64, 1, 9, 10, 90] {
        let i = MessageIndex::from_u64(i, 3);
        for conv in [Convention::Adhoc, Convention::Enum] {
            assert_eq!(
                from_doc.encode(&i, conv).unwrap(),
                direct.encode(&i, conv).unwrap()
            );
        }
    }
}

#[test]
fn both_conventions_list_the_same_spread() {
    let code = spread(2, 1, 2, 3);
    let size = 21u64;
    let mut adhoc: Vec<_> = (0..size)
        .map(|i| {
            code.encode(&MessageIndex::from_u64(i, 2), Convention::Adhoc)
                .unwrap()
        })
        .collect();
    let mut enumerative: Vec<_> = (0..size)
        .map(|i| {
            code.encode(&MessageIndex::from_u64(i, 2), Convention::Enum)
                .unwrap()
        })
        .collect();
    adhoc.sort();
    enumerative.sort();
    assert_eq!(adhoc, enumerative);
}

#[test]
fn union_document_round_trips_every_message() {
    let Code::Union(code) = build(
        r#"{"family": "orbit_union", "p": 2, "n": 4, "modulus_n": [1, 1, 0, 0, 1],
            "initials": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[1, 0, 0, 0], [0, 0, 1, 0]]]}"#,
    ) else {
        panic!("wrong family");
    };
    for i in 0..30u32 {
        let i = BigUint::from(i);
        let (j, u) = code.enc3(&i).unwrap();
        assert_eq!(code.retrieve3_from_codeword(&u).unwrap(), i);
        let (found, _) = code.locate(&u).unwrap();
        assert_eq!(found, j);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spread_round_trip(
        (p, r, k, m) in prop_oneof![Just((2u32, 1usize, 2usize, 4usize)), Just((2, 1, 3, 3)), Just((3, 1, 2, 3)), Just((2, 2, 2, 2)), Just((5, 1, 2, 2))],
        conv in prop_oneof![Just(Convention::Adhoc), Just(Convention::Enum)],
        seed in any::<u64>(),
    ) {
        let code = spread(p, r, k, m);
        let i = MessageIndex::from_biguint(&(BigUint::from(seed) % code.size()), code.q());
        let u = code.encode(&i, conv).unwrap();
        prop_assert_eq!(u.dim(), k);
        prop_assert_eq!(code.retrieve(&u, conv).unwrap(), i);
    }

    #[test]
    fn distinct_spread_codewords_are_at_distance_2k(a in 0u64..73, b in 0u64..73) {
        prop_assume!(a != b);
        let code = spread(2, 1, 3, 3);
        let u = code.enc1(&MessageIndex::from_u64(a, 2)).unwrap();
        let v = code.enc1(&MessageIndex::from_u64(b, 2)).unwrap();
        prop_assert_eq!(subspace_distance(code.field(), &u, &v).unwrap(), 6);
    }

    #[test]
    fn orbit_power_and_codeword_agree(i in 0u32..63) {
        let Code::Orbit(code) = build(
            r#"{"family": "cyclic_orbit", "p": 2, "n": 6, "initial_point": [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]}"#,
        ) else { panic!("wrong family") };
        let i = BigUint::from(i) % code.orbit_order();
        let u = code.enc2(&i).unwrap();
        prop_assert_eq!(code.retrieve2(&RetrieveInput::Codeword(u)).unwrap(), i.clone());
        prop_assert_eq!(code.retrieve2(&RetrieveInput::Power(code.generator_power(&i))).unwrap(), i);
    }

    #[test]
    fn isometries_preserve_spread_distances(
        bits in proptest::collection::vec(0u32..2, 16),
        a in 0u64..5,
        b in 0u64..5,
    ) {
        let f = BaseField::prime(2).unwrap();
        let m = Matrix::from_vec(4, 4, bits);
        prop_assume!(m.rank(&f) == 4);
        let iso = SemiLinearIsometry::new(&f, m, 0).unwrap();
        let code = spread(2, 1, 2, 2);
        let u = code.enc1(&MessageIndex::from_u64(a, 2)).unwrap();
        let v = code.enc1(&MessageIndex::from_u64(b, 2)).unwrap();
        let (fu, fv) = (apply_isometry(&f, &u, &iso).unwrap(), apply_isometry(&f, &v, &iso).unwrap());
        prop_assert_eq!(subspace_distance(&f, &fu, &fv).unwrap(), subspace_distance(&f, &u, &v).unwrap());
        let back = apply_isometry(&f, &fu, &iso.inverse(&f)).unwrap();
        prop_assert_eq!(back, u);
    }
}
