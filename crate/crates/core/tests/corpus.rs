use galsym_core::elliptic::{bundled_corpus, ordinary_density_sample, Reduction};

#[test]
fn corpus_has_ten_nonsingular_curves() {
    let corpus = bundled_corpus();
    assert_eq!(corpus.len(), 10);
    for c in &corpus {
        assert_ne!(c.discriminant(), 0, "{}", c.label);
        assert!(c.invariants_consistent());
    }
}

#[test]
fn discriminants_of_labelled_curves() {
    let corpus = bundled_corpus();
    let disc = |l: &str| corpus.iter().find(|c| c.label == l).unwrap().discriminant();
    assert_eq!(disc("11a3"), -11);
    assert_eq!(disc("37a1"), 37);
    assert_eq!(disc("43a1"), -43);
    assert_eq!(disc("53a1"), -53);
    assert_eq!(disc("389a1"), 389);
    assert_eq!(disc("5077a1"), 5077);
    assert_eq!(disc("14a1"), -21952);
    assert_eq!(disc("19a1"), -6859);
}

#[test]
fn enough_ordinary_curves_at_three_and_five() {
    let corpus = bundled_corpus();
    for (p, need) in [(3, 5), (5, 5)] {
        let n = corpus.iter().filter(|c| c.reduction_type(p).unwrap() == Reduction::GoodOrdinary).count();
        assert!(n >= need, "p = {p}: {n}");
    }
}

#[test]
fn densities() {
    for c in bundled_corpus() {
        let f = ordinary_density_sample(&c, 500).unwrap().fraction;
        if c.label.starts_with("cm") {
            assert!((0.35..=0.65).contains(&f));
        } else {
            assert!(f >= 0.8, "{}: {f}", c.label);
        }
    }
}
