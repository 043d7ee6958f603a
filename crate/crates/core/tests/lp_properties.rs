mod common;

use common::{random_lp, to_big, SmallLp};
use p1geom::lp::{kernel_basis, rank, solve_lp, LpStatus};
use p1geom::Rational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lp_strategy() -> impl Strategy<Value = SmallLp> {
    any::<u64>().prop_map(|seed| random_lp(&mut ChaCha8Rng::seed_from_u64(seed), 5, 6))
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..150 {
        let p = random_lp(&mut rng, 6, 8);
        let out = solve_lp(&p.to_program());
        match p.brute_force_optimum() {
            Some(best) => {
                assert_eq!(out.status, LpStatus::Optimal, "case {case}: {p:?}");
                assert_eq!(to_big(&out.value), best, "case {case}: {p:?}");
            }
            None => assert_eq!(out.status, LpStatus::Infeasible, "case {case}: {p:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strong_duality(p in lp_strategy()) {
        let lp = p.to_program();
        let out = solve_lp(&lp);
        if out.status == LpStatus::Optimal {
            prop_assert!(lp.is_feasible(&out.primal));
            prop_assert_eq!(lp.dual_value(&out.dual), Some(out.value.clone()));
        }
    }

    #[test]
    fn row_rescaling_keeps_optimum(p in lp_strategy(), k in 1i64..7, d in 1i64..5) {
        let lp = p.to_program();
        let a = solve_lp(&lp);
        let b = solve_lp(&lp.rescaled(&Rational::new(k, d)));
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn rank_of_transpose(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..6)) {
        let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect()).collect();
        let t: Vec<Vec<Rational>> = (0..5).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
        let r = rank(&m);
        prop_assert_eq!(r, rank(&t));
        let kernel = kernel_basis(&m, 5);
        prop_assert_eq!(kernel.len(), 5 - r);
        for v in &kernel {
            for row in &m {
                prop_assert!(p1geom::rational::dot(row, v).is_zero());
            }
        }
    }
}
