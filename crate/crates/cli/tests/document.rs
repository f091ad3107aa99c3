use pencil_cli::document::{document_from_pencil, resolve, to_json};
use pencil_cli::growth::growth_csv;
use pencil_cli::{parse_document, CliError};
use pencil_resolvent::linalg::{c, ComplexMatrix};
use pencil_resolvent::pencil::{Annulus, OperatorPencil};
use pencil_resolvent::resolvent::{laurent_coeffs, LaurentExpansion};
use pencil_resolvent::zoo::{build, Family, FamilySpec};
use pencil_resolvent::{BasicSolution, Error};

fn bits(m: &ComplexMatrix) -> Vec<(u64, u64)> {
    m.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
}

#[test]
fn written_document_parses_back_bit_exact() {
    let awkward = ComplexMatrix::from_row_slice(
        2,
        3,
        &[
            c(0.1, -0.0),
            c(1.0 / 3.0, 5e-324),
            c(f64::MAX, -f64::MIN_POSITIVE),
            c(-2.5e-308, 1e300),
            c(std::f64::consts::PI, -1.0),
            c(0.0, 0.0),
        ],
    );
    let other = awkward.map(|z| z * c(0.7, 0.3));
    let mut pencils = vec![OperatorPencil::new(awkward, other).unwrap()];
    for seed in 0..5 {
        pencils.push(build(&FamilySpec::new(Family::RandomRegular { n: 5, seed })).unwrap().pencil);
    }
    for p in pencils {
        let text = to_json(&document_from_pencil(&p));
        let back = resolve(&parse_document(&text).unwrap()).unwrap().pencil;
        assert_eq!(bits(&back.a0), bits(&p.a0));
        assert_eq!(bits(&back.a1), bits(&p.a1));
        assert_eq!(back.provenance.annulus_hint, p.provenance.annulus_hint);
    }
}

#[test]
fn bare_reals_are_rejected() {
    let doc = r#"{"pencil": {"a0": [[1.0]], "a1": [[[1.0, 0.0]]]}}"#;
    assert!(matches!(parse_document(doc), Err(CliError::Parse(_))));
    let doc = r#"{"pencil": {"family": "example3", "params": {"beta": 2.0}}}"#;
    let parsed = parse_document(doc).unwrap();
    let err = resolve(&parsed).unwrap_err();
    assert!(err.to_string().contains("[re, im]"), "{err}");
}

#[test]
fn family_document_with_settings() {
    let doc = r#"{
        "pencil": {"family": "example3", "params": {"beta": [2.0, 0.0], "alpha": "inverse_factorial"}, "truncation": 8, "region": "near-infinity"},
        "tolerances": {"rank_rel": 1e-11},
        "annulus_hint": {"s": 2.0, "r": null},
        "samples": [[3.0, 1.0]]
    }"#;
    let input = resolve(&parse_document(doc).unwrap()).unwrap();
    assert_eq!(input.pencil.domain_dim(), 8);
    assert_eq!(input.tolerances.rank_rel, 1e-11);
    assert_eq!(input.annulus, Annulus::new(2.0, f64::INFINITY).unwrap());
    assert_eq!(input.samples.unwrap().len(), 1);
}

#[test]
fn malformed_documents() {
    for doc in [
        "not json",
        "[]",
        r#"{"samples": []}"#,
        r#"{"pencil": {"a0": [[[1.0, 0.0]]]}}"#,
        r#"{"pencil": {"family": "example3"}, "extra": 1}"#,
        r#"{"pencil": {"family": "example3"}, "tolerances": {"rank_rel": -1.0}}"#,
        r#"{"pencil": {"a0": [[[1.0, 0.0], [1.0, 0.0]], [[1.0, 0.0]]], "a1": [[[1.0, 0.0]]]}}"#,
    ] {
        let res = parse_document(doc).and_then(|d| resolve(&d));
        assert_eq!(res.err().map(|e| e.exit_code()), Some(2), "{doc}");
    }
    let unknown = r#"{"pencil": {"family": "example3", "params": {"gamma": "inverse_factorial"}}}"#;
    let err = resolve(&parse_document(unknown).unwrap()).unwrap_err();
    assert!(err.to_string().contains("unknown parameter `gamma`"));
}

#[test]
fn trivial_expansion_gives_two_rows() {
    let p = OperatorPencil::new(ComplexMatrix::from_element(1, 1, c(0.0, 0.0)), ComplexMatrix::from_element(1, 1, c(1.0, 0.0))).unwrap();
    let b = BasicSolution {
        r_minus1: ComplexMatrix::from_element(1, 1, c(1.0, 0.0)),
        r0: ComplexMatrix::from_element(1, 1, c(0.0, 0.0)),
        annulus: Annulus::whole_plane(),
    };
    let exp = laurent_coeffs(&b, &p, 1, 0).unwrap();
    let csv = growth_csv(&exp).unwrap();
    assert_eq!(
        csv,
        "j,norm_fro,root_rate\n-1,1.0000000000000000e0,1.0000000000000000e0\n0,0.0000000000000000e0,NaN\n"
    );
}

#[test]
fn empty_expansion_is_an_error() {
    let exp = LaurentExpansion::new(0, vec![], Annulus::whole_plane());
    assert!(matches!(growth_csv(&exp), Err(CliError::Core(Error::EmptyExpansion))));
}
