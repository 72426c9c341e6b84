//! Grid sweeps of both Riemann solvers: every data pair must produce exactly
//! one admissible assembly that passes structural validation, criteria must
//! agree on the monotone family, and solutions must vary continuously across
//! layout-region boundaries.

use polyflood::admissibility::Criterion;
use polyflood::model::{Adsorption, FluxModel, State};
use polyflood::riemann::{l1_distance, solve_m0, solve_malpha, validate, Speed};

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn m0_grid_unique_valid_and_criteria_agree() {
    let m = FluxModel::monotone();
    let ss = grid(5, 0.08, 0.95);
    let cs = grid(4, 0.05, 0.95);
    let mut solved = 0;
    for &sl in &ss {
        for &cl in &cs {
            for &sr in &ss {
                for &cr in &cs {
                    let ul = State::new(sl, cl);
                    let ur = State::new(sr, cr);
                    let kk = solve_m0(&m, ul, ur, Criterion::KeyfitzKranzer)
                        .unwrap_or_else(|e| panic!("KK failed at {ul} -> {ur}: {e}"));
                    let rep = validate(&kk);
                    assert!(rep.all_ok(), "invalid at {ul} -> {ur}: {:?}", rep.issues);
                    let it = solve_m0(&m, ul, ur, Criterion::IsaacsonTemple).unwrap();
                    let dsm = solve_m0(&m, ul, ur, Criterion::DeSouzaMarchesin).unwrap();
                    assert_eq!(kk.waves.len(), it.waves.len(), "KK vs IT at {ul} -> {ur}");
                    assert_eq!(kk.waves.len(), dsm.waves.len(), "KK vs DSM at {ul} -> {ur}");
                    for ((a, b), c) in kk.waves.iter().zip(&it.waves).zip(&dsm.waves) {
                        assert!((a.speed.lo() - b.speed.lo()).abs() < 1e-9);
                        assert!((a.speed.lo() - c.speed.lo()).abs() < 1e-9);
                        assert!((a.left.s - b.left.s).abs() < 1e-9);
                        assert!((a.left.s - c.left.s).abs() < 1e-9);
                    }
                    solved += 1;
                }
            }
        }
    }
    assert_eq!(solved, 5 * 4 * 5 * 4);
}

#[test]
fn malpha_grid_unique_and_valid() {
    let m = FluxModel::monotone();
    let ss = grid(4, 0.1, 0.92);
    let cs = grid(3, 0.08, 0.9);
    for alpha in [0.2, 0.05] {
        let ads = Adsorption::reference(alpha);
        for &sl in &ss {
            for &cl in &cs {
                for &sr in &ss {
                    for &cr in &cs {
                        let ul = State::new(sl, cl);
                        let ur = State::new(sr, cr);
                        let sol = solve_malpha(&m, &ads, ul, ur)
                            .unwrap_or_else(|e| panic!("alpha={alpha} {ul} -> {ur}: {e}"));
                        let rep = validate(&sol);
                        assert!(
                            rep.all_ok(),
                            "invalid at alpha={alpha} {ul} -> {ur}: {:?}",
                            rep.issues
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn solutions_continuous_across_region_boundaries() {
    // pairs of right states straddling a region boundary at distance 1e-3
    // must give nearby solutions in L1
    let m = FluxModel::monotone();
    let u_l = State::new(0.9, 0.8);
    let window = (-0.5, 3.5);
    // region II/III boundary: the horizontal line c = c_L on the lower side
    let straddles = [
        (State::new(0.3, 0.7995), State::new(0.3, 0.8005)),
        // region I/III boundary: the coincidence locus at c > c_L
        (State::new(0.80, 0.9), State::new(0.82, 0.9)),
    ];
    for (ua, ub) in straddles {
        let sa = solve_m0(&m, u_l, ua, Criterion::IsaacsonTemple).unwrap();
        let sb = solve_m0(&m, u_l, ub, Criterion::IsaacsonTemple).unwrap();
        let d = l1_distance(&sa, &sb, window);
        assert!(d < 1e-1, "jump {d} across boundary between {ua} and {ub}");
    }
    // sharper probe at 1e-3 separation near the II/III line
    let sa = solve_m0(&m, u_l, State::new(0.3, 0.7995), Criterion::IsaacsonTemple).unwrap();
    let sb = solve_m0(&m, u_l, State::new(0.3, 0.8005), Criterion::IsaacsonTemple).unwrap();
    assert!(l1_distance(&sa, &sb, window) < 1e-2);
}

#[test]
fn wave_speeds_are_positive_and_bounded() {
    // all characteristic speeds of these models live in [0, ~2.5]; no wave
    // should escape that range
    let m = FluxModel::monotone();
    for (ul, ur) in [
        (State::new(0.9, 0.1), State::new(0.1, 0.9)),
        (State::new(0.1, 0.9), State::new(0.9, 0.1)),
    ] {
        let sol = solve_m0(&m, ul, ur, Criterion::DeSouzaMarchesin).unwrap();
        for w in &sol.waves {
            match w.speed {
                Speed::Point(s) => assert!(s > -1e-9 && s < 3.0),
                Speed::Fan(a, b) => assert!(a > -1e-9 && b < 3.0),
            }
        }
    }
}
