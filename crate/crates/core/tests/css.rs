use cssft::classical::{bch_code, extended_qr_code, punctured_reed_muller, ClassicalCode, DistanceKind, Family};
use cssft::css::{css_from_classical, derive_smaller_code, CssError, PauliProduct};
use cssft::gf2::{BinaryMatrix, BinaryVector};
use cssft::registry::{lookup, NAMED_CODES};

fn unit(k: usize, i: usize) -> BinaryVector {
    BinaryVector::unit(k, i)
}

/// Brute-force commutation of every X̄_{e_i} with every Z̄_{e_j}.
fn commutation_matrix(code: &cssft::css::CssCode) -> BinaryMatrix {
    let k = code.k;
    let rows = (0..k)
        .map(|i| {
            let x = code.encoded_x(&unit(k, i));
            BinaryVector::from_bits((0..k).map(|j| {
                let z = code.encoded_z(&unit(k, j));
                // Pauli products anticommute iff XZ and ZX differ in sign.
                (&x * &z).phase != (&z * &x).phase
            }))
        })
        .collect();
    BinaryMatrix::from_rows(k, rows)
}

#[test]
fn steane_from_hamming() {
    let hamming = punctured_reed_muller(1, 3).unwrap();
    let code = css_from_classical(&hamming).unwrap();
    assert_eq!((code.n, code.k, code.distance.value), (7, 1, 3));
    assert_eq!(code.distance.kind, DistanceKind::Exact);
    assert_eq!(code.coset_leaders.row(0).weight(), 3);
    assert_eq!(code.dd_transpose, BinaryMatrix::identity(1));
    let x = code.encoded_x(&unit(1, 0));
    let z = code.encoded_z(&unit(1, 0));
    assert_eq!(x.x_mask, *code.coset_leaders.row(0));
    assert_eq!(z.z_mask, *code.coset_leaders.row(0));
    assert!(!x.commutes_with(&z));
    let lemmas = code.check_lemma_conditions();
    assert!(lemmas.values().all(|&v| v), "{lemmas:?}");
}

#[test]
fn zero_word_gives_identity() {
    let code = lookup("steane").unwrap().build().unwrap();
    assert!(code.encoded_x(&BinaryVector::zeros(1)).is_identity());
    assert!(code.encoded_z(&BinaryVector::zeros(1)).is_identity());
}

#[test]
fn stabilizers_commute_and_logicals_pair() {
    for name in ["steane", "four-qubit", "rm15", "hamming15", "bch31-11", "golay23"] {
        let code = lookup(name).unwrap().build().unwrap();
        assert!(code.stabilizer_x.mul_transpose(&code.stabilizer_z).is_zero(), "{name}");
        assert!(commutation_matrix(&code).is_identity(), "{name}");
        // Logical operators commute with every stabilizer.
        for i in 0..code.k {
            let x = code.encoded_x(&unit(code.k, i));
            let z = code.encoded_z(&unit(code.k, i));
            for s in code.stabilizer_z.rows() {
                assert!(!x.x_mask.dot(s), "{name}");
            }
            for s in code.stabilizer_x.rows() {
                assert!(!z.z_mask.dot(s), "{name}");
            }
        }
        assert_eq!(code.dd_transpose, code.coset_leaders.mul_transpose(&code.coset_leaders));
    }
}

#[test]
fn hamming15_anticommutation_is_identity() {
    let code = lookup("hamming15").unwrap().build().unwrap();
    assert_eq!((code.n, code.k, code.distance.value), (15, 7, 3));
    assert_eq!(commutation_matrix(&code), BinaryMatrix::identity(7));
}

#[test]
fn encoded_x_is_linear() {
    let code = lookup("hamming15").unwrap().build().unwrap();
    for (a, b) in [(3u64, 5u64), (127, 1), (64, 63)] {
        let (u, v) = (BinaryVector::from_u64(7, a), BinaryVector::from_u64(7, b));
        let sum = &u ^ &v;
        let prod = &code.encoded_x(&u) * &code.encoded_x(&v);
        assert_eq!(prod, code.encoded_x(&sum));
    }
}

#[test]
fn leaders_lie_in_c1_outside_c0() {
    let code = lookup("bch31-11").unwrap().build().unwrap();
    let c0 = &code.c0_generator;
    for r in code.coset_leaders.rows() {
        assert!(code.c1_generator.row_space_contains(r));
        assert!(!c0.row_space_contains(r));
    }
    // Distinct combinations give distinct cosets: D̃ is independent modulo C₀.
    assert_eq!(c0.stack(&code.coset_leaders).rank(), c0.rank() + code.k);
    assert!(code.leaders_certified);
    assert_eq!(code.distance.value, 5);
    assert!(code.check_lemma_conditions()["L4"]);
}

#[test]
fn rm15_is_nested_with_weight_residues() {
    let code = lookup("rm15").unwrap().build().unwrap().with_lemma1(8, 28).unwrap();
    assert_eq!((code.n, code.k, code.distance.value), (15, 1, 3));
    assert_eq!(code.coset_leaders.row(0).weight(), 7);
    assert_eq!(code.lemma1_residues(), Some((0, 7)));
    let lemmas = code.check_lemma_conditions();
    assert!(!lemmas["L3"]);
    assert!(lemmas["DDT=I"]);
}

#[test]
fn golay_and_qr48_have_no_logical_qubits() {
    let golay = css_from_classical(&extended_qr_code(23).unwrap()).unwrap();
    assert_eq!((golay.n, golay.k, golay.distance.value), (24, 0, 8));
    assert_eq!(golay.coset_leaders.row_count(), 0);
    assert!(golay.encoded_x(&BinaryVector::zeros(0)).is_identity());
    assert!(golay.satisfies_lemma4());
}

#[test]
fn golay_row_deletion_gives_23_1_7() {
    let golay = lookup("golay24").unwrap().build().unwrap();
    for row in [0, 5, 11] {
        let derived = derive_smaller_code(&golay, row).unwrap();
        assert_eq!((derived.n, derived.k), (23, 1));
        assert_eq!(derived.distance.value, 7);
        assert_eq!(derived.distance.kind, DistanceKind::Exact);
        assert!(derived.c0_generator.is_self_orthogonal());
        assert!(derived.satisfies_lemma4());
    }
}

#[test]
fn qr48_row_deletion_gives_47_1_11() {
    let code = lookup("qr47").unwrap().build().unwrap();
    assert_eq!((code.n, code.k, code.distance.value), (47, 1, 11));
    assert_eq!(code.distance.kind, DistanceKind::Exact);
    assert!(code.satisfies_lemma4());
}

#[test]
fn qr80_row_deletion_gives_79_1_15_bound() {
    let code = lookup("qr79").unwrap().build().unwrap();
    assert_eq!((code.n, code.k), (79, 1));
    assert_eq!(code.distance.value, 15);
    assert_eq!(code.distance.kind, DistanceKind::Bound);
    assert!(code.satisfies_lemma4());
}

#[test]
fn bch_127_29_15() {
    let code = css_from_classical(&bch_code(7, 15).unwrap()).unwrap();
    assert_eq!((code.n, code.k, code.distance.value), (127, 29, 15));
    assert_eq!(code.distance.kind, DistanceKind::Design);
    assert!(code.satisfies_lemma4());
    assert_eq!(code.encoded_x(&unit(29, 0)).x_mask, *code.coset_leaders.row(0));
    assert_eq!(commutation_matrix(&code), BinaryMatrix::identity(29));
}

#[test]
fn bch_63_27_7_distance_is_exact() {
    let code = lookup("bch63-27").unwrap().build().unwrap();
    assert_eq!((code.n, code.k, code.distance.value), (63, 27, 7));
    assert_eq!(code.distance.kind, DistanceKind::Exact);
}

#[test]
fn non_dual_containing_code_is_rejected() {
    let g = BinaryMatrix::from_strs(&["1000", "0100"]);
    let c = ClassicalCode::from_generator(&g, Family::UserSupplied);
    assert!(matches!(css_from_classical(&c), Err(CssError::NotDualContaining)));
}

#[test]
fn nested_code_without_self_orthogonality_fails_lemma3() {
    // C₀ = span{1100}, C₁ = span{1100, 1010}.
    let c0 = ClassicalCode::from_generator(&BinaryMatrix::from_strs(&["1100"]), Family::UserSupplied);
    let c1 = ClassicalCode::from_generator(&BinaryMatrix::from_strs(&["1100", "1010"]), Family::UserSupplied);
    let code = cssft::css::css_from_nested(&c0, &c1).unwrap();
    assert!(!code.check_lemma_conditions()["L3"]);
    assert!(code.stabilizer_x.mul_transpose(&code.stabilizer_z).is_zero());
    assert!(commutation_matrix(&code).is_identity());
}

#[test]
fn registry_parameters() {
    for entry in NAMED_CODES.iter().filter(|c| c.n < 200) {
        let code = entry.build().unwrap();
        assert_eq!((code.n, code.k, code.distance.value), (entry.n, entry.k, entry.d), "{}", entry.name);
        assert!(code.satisfies_lemma4() || entry.name == "rm15", "{}", entry.name);
    }
}

#[test]
fn pauli_identity_is_neutral() {
    let p = PauliProduct::new("1010".parse().unwrap(), "0110".parse().unwrap());
    assert_eq!(&p * &PauliProduct::identity(4), p);
}
