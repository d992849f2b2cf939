mod common;

use gwp::geometry::{Cuboid, Point3};
use gwp::placement::{
    build_constraints, check_point, gwp_solve, min_max_excess, FapState, NodeId, EPS_FEAS, EPS_SEP,
};
use gwp::rf::{McsTable, RadioConfig};
use gwp::scenario::{plan_gateway_track, scenario_a, FlowDirection};
use gwp::baselines::PlacementStrategy;
use proptest::prelude::*;

fn point_in(side: f64) -> impl Strategy<Value = Point3> {
    (0.0..side, 0.0..side, 0.0..side).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn demand() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![50e6, 100e6, 200e6, 300e6, 500e6, 700e6])
}

fn faps(side: f64) -> impl Strategy<Value = Vec<FapState>> {
    prop::collection::vec((point_in(side), demand()), 1..6).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (position, demand_bps))| FapState {
                id: NodeId(i as u32 + 1),
                position,
                demand_bps,
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solutions_satisfy_every_invariant(faps in faps(60.0)) {
        let bounds = Cuboid::from_dims(60.0, 60.0, 60.0).unwrap();
        let table = McsTable::default();
        let cfg = RadioConfig::default();
        let sol = match gwp_solve(&faps, &table, &cfg, &bounds) {
            Ok(s) => s,
            Err(gwp::Error::NoSolution { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(sol.min_slack() >= -EPS_FEAS, "slacks {:?}", sol.slacks);
        prop_assert!(sol.tx_power_dbm >= 0.0 && sol.tx_power_dbm <= cfg.max_tx_power_dbm);
        prop_assert_eq!(sol.tx_power_dbm.fract(), 0.0);
        prop_assert!(bounds.contains(&sol.position));
        for f in &faps {
            prop_assert!(sol.position.distance(&f.position) >= EPS_SEP * (1.0 - 1e-9));
        }
        let constraints = build_constraints(&faps, &table).unwrap();
        if sol.tx_power_dbm >= 1.0 {
            let below = min_max_excess(&constraints, sol.tx_power_dbm - 1.0, &cfg, &bounds).unwrap();
            prop_assert!(below.value > EPS_FEAS, "feasible one dB lower: {}", below.value);
        }
        let slacks = check_point(&sol.position, &constraints, sol.tx_power_dbm, &cfg);
        prop_assert_eq!(slacks, sol.slacks);
    }

    #[test]
    fn excess_is_translation_invariant(
        centers in prop::collection::vec((point_in(40.0), 2.0f64..40.0), 1..5),
        shift in point_in(30.0),
    ) {
        let cfg = RadioConfig::default();
        let a = Cuboid::from_dims(40.0, 40.0, 40.0).unwrap();
        let b = Cuboid::new(shift, shift + Point3::new(40.0, 40.0, 40.0)).unwrap();
        let ca: Vec<_> = centers.iter().map(|(c, r)| common::ball(*c, *r)).collect();
        let cb: Vec<_> = centers.iter().map(|(c, r)| common::ball(*c + shift, *r)).collect();
        let ga = min_max_excess(&ca, 0.0, &cfg, &a).unwrap();
        let gb = min_max_excess(&cb, 0.0, &cfg, &b).unwrap();
        prop_assert!((ga.value - gb.value).abs() < 1e-5, "{} vs {}", ga.value, gb.value);
    }

    #[test]
    fn feasibility_is_monotone_in_power(faps in faps(60.0), p in 0u8..29) {
        let bounds = Cuboid::from_dims(60.0, 60.0, 60.0).unwrap();
        let cfg = RadioConfig::default();
        let constraints = build_constraints(&faps, &McsTable::default()).unwrap();
        let low = min_max_excess(&constraints, f64::from(p), &cfg, &bounds).unwrap();
        if low.value <= 0.0 {
            let slacks = check_point(&low.point, &constraints, f64::from(p) + 1.0, &cfg);
            prop_assert!(slacks.iter().all(|s| *s >= 0.0));
        }
    }

    #[test]
    fn solver_sign_matches_grid_scan(
        centers in prop::collection::vec((point_in(40.0), 3.0f64..30.0), 1..6),
    ) {
        let bounds = Cuboid::from_dims(40.0, 40.0, 40.0).unwrap();
        let cs: Vec<_> = centers.iter().map(|(c, r)| common::ball(*c, *r)).collect();
        let g = min_max_excess(&cs, 0.0, &RadioConfig::default(), &bounds).unwrap().value;
        let grid = common::grid_has_feasible_point(&centers, &bounds, 0.25);
        if grid {
            prop_assert!(g <= 1e-6, "grid feasible but g = {g}");
        }
        if g <= -0.5 {
            prop_assert!(grid, "g = {g} but no feasible grid point");
        }
    }
}

#[test]
fn flow_direction_does_not_change_the_solution() {
    let up = scenario_a(0.75, 3.0).unwrap().truncated(5.0).unwrap();
    let mut down = up.clone();
    for f in &mut down.faps {
        f.direction = FlowDirection::Downlink;
    }
    let a = plan_gateway_track(&up, &PlacementStrategy::Gwp).unwrap();
    let b = plan_gateway_track(&down, &PlacementStrategy::Gwp).unwrap();
    assert_eq!(a.updates, b.updates);
}

#[test]
fn boundary_and_coincident_slacks() {
    let cfg = RadioConfig::default();
    let c = common::ball(Point3::new(5.0, 5.0, 5.0), 7.0);
    let r = c.radius(0.0, &cfg);
    assert!((r - 7.0).abs() < 1e-9);
    assert_eq!(check_point(&c.center, &[c], 0.0, &cfg), vec![r]);
    let edge = c.center + Point3::new(r, 0.0, 0.0);
    assert!(check_point(&edge, &[c], 0.0, &cfg)[0].abs() < 1e-12);
    assert!(build_constraints(&[], &McsTable::default()).unwrap().is_empty());
}
