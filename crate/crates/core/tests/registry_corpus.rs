use hardylab_core::circle_grid::CircleGrid;
use hardylab_core::factorization::{inner_residual, is_outer, DEFAULT_INNER_TOL, DEFAULT_OUTER_TOL};
use hardylab_core::registry::{self, FunctionClass};
use hardylab_core::LabError;

#[test]
fn every_entry_builds_with_finite_samples() {
    let grid = CircleGrid::new(1024).unwrap();
    for e in registry::entries() {
        let f = registry::boundary(e.name, grid).unwrap();
        assert_eq!(f.len(), 1024);
        assert!(f.values().iter().all(|v| v.is_finite()), "{}", e.name);
        assert!(!e.formula.is_empty());
    }
}

#[test]
fn unknown_names_are_rejected() {
    assert!(matches!(registry::lookup("no-such-function"), Err(LabError::Unknown(_))));
    let grid = CircleGrid::new(256).unwrap();
    assert!(registry::boundary("no-such-function", grid).is_err());
}

#[test]
fn oracle_corpus_spans_all_classes() {
    let classes: Vec<FunctionClass> =
        registry::ORACLE_CORPUS.iter().map(|n| registry::lookup(n).unwrap().class).collect();
    assert!(registry::ORACLE_CORPUS.len() >= 10);
    for c in [FunctionClass::Outer, FunctionClass::Inner, FunctionClass::Mixed] {
        assert!(classes.contains(&c));
    }
}

#[test]
fn declared_classes_match_the_jensen_and_inner_tests() {
    // the oscillation of exp((z+i)/(z-i)) near i needs the finer grid
    let grid = CircleGrid::new(1 << 14).unwrap();
    for e in registry::entries() {
        let f = registry::boundary(e.name, grid).unwrap();
        let outer = is_outer(&f, DEFAULT_OUTER_TOL).unwrap();
        let inner = inner_residual(&f).unwrap() < DEFAULT_INNER_TOL;
        match e.class {
            FunctionClass::Outer => assert!(outer, "{}", e.name),
            FunctionClass::Inner => assert!(inner && !outer, "{}", e.name),
            FunctionClass::Mixed => assert!(!outer && !inner, "{}", e.name),
        }
    }
}
