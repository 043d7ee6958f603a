mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{facial_set_from_facets, gradient_ascent_oracle};
use p1geom::census::{statistic_census_with, zero_pattern_catalog, CensusOptions};
use p1geom::mle::{check_mle_exists, facial_set_of, fit, verify_moment_equations, FitOptions};
use p1geom::model::{enumerate_networks, DesignMatrix, MarginVector, Network, ReciprocityVariant, DEFAULT_ENUMERATION_CAP};
use p1geom::polyhedra::PointSetPolytope;

fn fibers(a: &DesignMatrix) -> BTreeMap<MarginVector, Vec<Network>> {
    let mut map: BTreeMap<MarginVector, Vec<Network>> = BTreeMap::new();
    for x in enumerate_networks(a.n(), DEFAULT_ENUMERATION_CAP).unwrap() {
        map.entry(a.sufficient_statistic(&x).unwrap()).or_default().push(x);
    }
    map
}

#[test]
fn facial_sets_match_facet_brute_force_at_three() {
    for v in ReciprocityVariant::ALL {
        let a = DesignMatrix::new(3, v, true).unwrap();
        for t in fibers(&a).keys() {
            let lp = facial_set_of(&a, t).unwrap();
            assert_eq!(lp.indices, facial_set_from_facets(&a, t), "{v} {t:?}");
            assert_eq!(lp.is_full(a.ncols()), check_mle_exists(&a, t).unwrap().exists);
        }
    }
}

#[test]
fn row_sum_n_minus_one_forces_single_configuration() {
    let a = DesignMatrix::new(3, ReciprocityVariant::Zero, true).unwrap();
    // 1 -> 2, 1 -> 3, 2 -> 3: row 1 sums to 2
    let x = Network::from_edges(3, |i, j| i < j);
    let t = a.sufficient_statistic(&x).unwrap();
    assert!(!check_mle_exists(&a, &t).unwrap().exists);
    let face = facial_set_of(&a, &t).unwrap();
    // dyad (1,2) columns 0..4, dyad (1,3) columns 4..8, order (0,0),(1,0),(0,1),(1,1)
    for c in [0, 2, 3, 4, 6, 7] {
        assert!(!face.contains(c), "column {c} should be excluded");
    }
    assert!(face.contains(1) && face.contains(5));
    assert_eq!(face.indices, facial_set_from_facets(&a, &t));
    let f = fit(&a, &x, FitOptions::default()).unwrap();
    assert!(f.converged);
    assert_eq!(f.probabilities[1], 1.0);
    assert_eq!(f.probabilities[5], 1.0);
}

#[test]
fn fits_at_three_zero_match_oracle() {
    let a = DesignMatrix::new(3, ReciprocityVariant::Zero, true).unwrap();
    let all = fibers(&a);
    assert_eq!(all.len(), 63);
    for (t, nets) in &all {
        let face = facial_set_of(&a, t).unwrap();
        let oracle = gradient_ascent_oracle(&a, t, &facial_set_from_facets(&a, t), 200_000);
        let fits: Vec<_> = nets.iter().map(|x| fit(&a, x, FitOptions::default()).unwrap()).collect();
        for f in &fits {
            assert!(f.converged, "{t:?}");
            assert!(f.residual <= 1e-8);
            assert!(verify_moment_equations(&a, f, t, 1e-8));
            let support: Vec<usize> = (0..a.ncols()).filter(|&c| f.probabilities[c] > 0.0).collect();
            assert_eq!(support, face.indices, "{t:?}");
            for (p, q) in f.probabilities.iter().zip(&oracle) {
                assert!((p - q).abs() < 1e-6, "{t:?}: {p} vs {q}");
            }
            assert!(f.objective_trace.windows(2).all(|w| w[1] >= w[0]));
        }
        for f in &fits[1..] {
            for (p, q) in f.probabilities.iter().zip(&fits[0].probabilities) {
                assert!((p - q).abs() <= 2e-8);
            }
        }
    }
}

#[test]
fn fits_on_boundary_at_four() {
    let a = DesignMatrix::new(4, ReciprocityVariant::EdgeDependent, true).unwrap();
    for idx in [5u64, 777, 1234, 4000] {
        let x = p1geom::model::network_at(4, idx);
        let t = a.sufficient_statistic(&x).unwrap();
        let f = fit(&a, &x, FitOptions::default()).unwrap();
        assert!(!f.exists);
        assert!(f.converged, "network {idx}: residual {}", f.residual);
        assert!(verify_moment_equations(&a, &f, &t, 1e-10));
    }
}

#[test]
fn point_set_interior_matches_existence_at_three() {
    for v in ReciprocityVariant::ALL {
        let a = DesignMatrix::new(3, v, false).unwrap();
        let polytope = PointSetPolytope::observable(&a, DEFAULT_ENUMERATION_CAP).unwrap();
        for t in polytope.points() {
            assert_eq!(polytope.relative_interior_contains(t).unwrap(), check_mle_exists(&a, t).unwrap().exists);
        }
    }
}

#[test]
fn nonexistence_propagates_to_richer_variants() {
    let opts = CensusOptions::default();
    let zero = statistic_census_with(4, ReciprocityVariant::Zero, false, &opts).unwrap();
    let constant = statistic_census_with(4, ReciprocityVariant::Constant, false, &opts).unwrap();
    let edge = statistic_census_with(4, ReciprocityVariant::EdgeDependent, false, &opts).unwrap();
    let zero_ok: BTreeSet<Network> = zero.networks_with_mle().into_iter().collect();
    let const_ok: Vec<Network> = constant.networks_with_mle();
    assert_eq!(const_ok.len(), 96);
    assert!(const_ok.iter().all(|x| zero_ok.contains(x)));
    assert!(edge.networks_with_mle().is_empty());
}

#[test]
fn subtle_patterns_force_nonexistence() {
    for n in [3, 4] {
        let a = DesignMatrix::new(n, ReciprocityVariant::Zero, true).unwrap();
        for p in zero_pattern_catalog(n).unwrap() {
            let x = p.imposed_on_complete();
            let t = a.sufficient_statistic(&x).unwrap();
            assert!(!check_mle_exists(&a, &t).unwrap().exists, "{:?}", p.cells);
            assert!(!facial_set_of(&a, &t).unwrap().is_full(a.ncols()));
        }
    }
}

/// No network containing a Subtle pattern has every row and column sum
/// strictly between 0 and n-1.
#[test]
fn subtle_patterns_always_hit_a_degree_bound() {
    for n in [3, 4] {
        let patterns = zero_pattern_catalog(n).unwrap();
        for x in enumerate_networks(n, 4).unwrap() {
            let interior_degrees = x.out_degrees().iter().chain(&x.in_degrees()).all(|&d| d > 0 && d < n - 1);
            if !interior_degrees {
                continue;
            }
            for p in &patterns {
                let contains = p.cells.iter().all(|&(i, j)| !x.has_edge(i - 1, j - 1));
                assert!(!contains, "n={n}: {:?}", p.cells);
            }
        }
    }
}
