use proptest::prelude::*;
use qamseq::analysis::cross_correlation;
use qamseq::families::{
    build, build_cq, build_cq_increased, build_cq_s1, build_iq16, build_sq, BuildOptions,
    CqOptions, FamilyInstance, FamilyKind, GroundCoset, SqOptions,
};
use qamseq::galois::{default_polynomial, GaloisRing};
use qamseq::gaussian::{i_pow, GaussianInt};
use qamseq::quaternary::qcorrelation;
use qamseq::Error;

fn ring(r: u32) -> GaloisRing {
    GaloisRing::new(r, default_polynomial(r).unwrap()).unwrap()
}

fn fam(r: u32, kind: FamilyKind, m: usize) -> FamilyInstance {
    build(&ring(r), kind, m, &BuildOptions::default()).unwrap()
}

fn cores(f: &FamilyInstance, user: usize, kappa: &[u8]) -> Vec<GaussianInt> {
    f.modulate_cores(user, kappa).unwrap()
}

#[test]
fn sizes_and_rates() {
    for r in 3..=5u32 {
        let q = 1usize << r;
        let n = q - 1;
        for m in 2..=3usize {
            let cq = fam(r, FamilyKind::Cq, m);
            assert_eq!(
                (cq.num_users(), cq.data_rate()),
                (q / m, 2 * m as u32),
                "CQ r={r} m={m}"
            );
            let ci = fam(r, FamilyKind::CqIncreased, m);
            assert_eq!(
                (ci.num_users(), ci.data_rate()),
                (q / (2 * m), 3 * m as u32)
            );
            // l = 0 for m = 2, l = 1 for m = 3
            let sq = fam(r, FamilyKind::Sq, m);
            assert_eq!(
                (sq.num_users(), sq.data_rate()),
                (q >> (m - 1), m as u32 + 1)
            );
            assert_eq!(sq.period(), n);
            let p = fam(r, FamilyKind::P2m, m);
            assert_eq!(p.data_rate(), m as u32 + 1);
        }
        for kind in [FamilyKind::Iq16, FamilyKind::Ip8] {
            let f = fam(r, kind, 2);
            assert_eq!(
                (f.num_users(), f.period(), f.data_rate()),
                ((2 * n + 2) / 4, 2 * n, 3)
            );
        }
    }
    let s1 = fam(3, FamilyKind::CqS1, 2);
    assert_eq!((s1.num_users(), s1.data_rate()), (32, 4));
}

#[test]
fn sq_group_size_window() {
    for r in 3..=6u32 {
        let q = 1usize << r;
        for m in 2..=(1usize << (r - 1)) + 1 {
            let g = fam(r, FamilyKind::Sq, m).num_users() as f64;
            let lo = q as f64 / (4.0 * (m - 1) as f64);
            let hi = q as f64 / (2.0 * (m - 1) as f64);
            assert!(g > lo && g <= hi, "r={r} m={m} |G|={g}");
        }
    }
}

#[test]
fn alphabet_closure_exhaustive_r4() {
    let cases = [
        (FamilyKind::Cq, 2),
        (FamilyKind::Cq, 3),
        (FamilyKind::CqIncreased, 2),
        (FamilyKind::Sq, 2),
        (FamilyKind::Sq, 3),
        (FamilyKind::Sq, 5),
        (FamilyKind::P2m, 2),
        (FamilyKind::P2m, 3),
        (FamilyKind::Iq16, 2),
        (FamilyKind::Ip8, 2),
    ];
    for (kind, m) in cases {
        let f = fam(4, kind, m);
        for u in 0..f.num_users() {
            let alphabet = f.alphabet(u);
            for kappa in f.data_space(u).words() {
                let seq = f.modulate(u, &kappa).unwrap();
                assert!(
                    seq.symbols.iter().all(|&s| alphabet.contains(s)),
                    "{kind:?} m={m} user {u}"
                );
            }
        }
    }
}

#[test]
fn json_round_trip_preserves_sequences() {
    for (kind, m) in [
        (FamilyKind::Cq, 2),
        (FamilyKind::Sq, 3),
        (FamilyKind::Ip8, 2),
        (FamilyKind::CqS1, 2),
    ] {
        let f = fam(3, kind, m);
        let back = FamilyInstance::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back.plan(), f.plan());
        for u in 0..f.num_users() {
            for kappa in f.data_space(u).words() {
                assert_eq!(cores(&back, u, &kappa), cores(&f, u, &kappa));
            }
        }
    }
}

#[test]
fn tampered_json_is_rejected() {
    let f = fam(4, FamilyKind::Cq, 2);
    let mut v: serde_json::Value = serde_json::from_str(&f.to_json().unwrap()).unwrap();
    // duplicate a coefficient across users
    let first = v["users"][0]["coefficients"][0].clone();
    v["users"][1]["coefficients"][0] = first;
    assert!(FamilyInstance::from_json(&v.to_string()).is_err());
}

#[test]
fn cq_distance_between_neighbouring_words() {
    let f = fam(4, FamilyKind::Cq, 2);
    let n = f.period() as i64;
    for u in 0..f.num_users() {
        let a = cores(&f, u, &[0, 0]);
        let b = cores(&f, u, &[1, 0]);
        let d2: i64 = a.iter().zip(&b).map(|(x, y)| 2 * (x - y).norm_sqr()).sum();
        assert_eq!(d2, 4 * n);
    }
}

#[test]
fn sq_kappa0_rotates_whole_sequence() {
    let f = fam(4, FamilyKind::Sq, 3);
    for u in 0..f.num_users() {
        let base = cores(&f, u, &[0, 1, 0]);
        for k in 1..4u8 {
            let rotated: Vec<GaussianInt> = base.iter().map(|&c| c * i_pow(k)).collect();
            assert_eq!(cores(&f, u, &[k, 1, 0]), rotated);
        }
    }
}

#[test]
fn sq_same_level_components_collapse_at_zero_shift() {
    let rg = ring(4);
    for coset in [GroundCoset::TraceZero, GroundCoset::TraceOne] {
        let f = build_sq(
            &rg,
            3,
            &SqOptions {
                ground_coset: coset,
                shifts: None,
            },
        )
        .unwrap();
        for a in 0..f.num_users() {
            for b in 0..f.num_users() {
                if a == b {
                    continue;
                }
                for k in 0..3 {
                    let th = qcorrelation(&f.components(a)[k], &f.components(b)[k], 0).unwrap();
                    assert_eq!(th, GaussianInt::new(-1, 0));
                }
            }
        }
    }
}

#[test]
fn iq16_kappa1_flip() {
    let f = build_iq16(&ring(4)).unwrap();
    let n = f.base_period();
    for u in 0..f.num_users() {
        let a = cores(&f, u, &[0, 0]);
        let b = cores(&f, u, &[0, 1]);
        for t in 0..2 * n {
            let u0 = i_pow(f.components(u)[0].values[t % n]);
            let u1 = i_pow(f.components(u)[1].values[t % n]);
            let diff = a[t] - b[t];
            if t % 2 == 0 {
                assert_eq!(diff, u1 * 2);
            } else {
                assert_eq!(diff, -u1 * 4 * i_pow(1));
            }
            // the other component is untouched
            assert_eq!(
                a[t] + b[t],
                if t % 2 == 0 {
                    u0 * 4
                } else {
                    u0 * 2 * i_pow(1)
                }
            );
        }
    }
}

#[test]
fn increased_rate_with_zero_selection_matches_cq() {
    let rg = ring(4);
    let cq = build_cq(&rg, 2, &CqOptions::default()).unwrap();
    let ci = build_cq_increased(&rg, 2, &CqOptions::default()).unwrap();
    for p in 0..ci.num_users() {
        for k in cq.data_space(0).words() {
            let mut kappa = k.clone();
            kappa.extend([0, 0]);
            assert_eq!(cores(&ci, p, &kappa), cores(&cq, 2 * p, &k));
            kappa[2..].copy_from_slice(&[1, 1]);
            assert_eq!(cores(&ci, p, &kappa), cores(&cq, 2 * p + 1, &k));
        }
    }
}

#[test]
fn s1_rows_without_h_match_cq() {
    let rg = ring(3);
    let cq = build_cq(&rg, 2, &CqOptions::default()).unwrap();
    let s1 = build_cq_s1(&rg, 2, &CqOptions::default()).unwrap();
    for u in 0..cq.num_users() {
        for k in cq.data_space(u).words() {
            assert_eq!(cores(&s1, u, &k), cores(&cq, u, &k));
        }
    }
}

#[test]
fn modulate_rejects_bad_inputs() {
    let f = fam(3, FamilyKind::Sq, 3);
    assert!(matches!(
        f.modulate(f.num_users(), &[0, 0, 0]),
        Err(Error::UserOutOfRange(_))
    ));
    assert!(matches!(f.modulate(0, &[0, 2, 0]), Err(Error::DataWord(_))));
    assert!(matches!(f.modulate(0, &[0, 0]), Err(Error::DataWord(_))));
}

#[test]
fn kind_constraints() {
    let rg = ring(4);
    assert!(build(&rg, FamilyKind::Iq16, 3, &BuildOptions::default()).is_err());
    assert!(build(&rg, FamilyKind::Sq, 10, &BuildOptions::default()).is_err());
    assert!(build(&rg, FamilyKind::P2m, 5, &BuildOptions::default()).is_err());
    let dependent = BuildOptions {
        shifts: Some(vec![0, 0]),
        ..Default::default()
    };
    assert!(build(&rg, FamilyKind::Cq, 2, &dependent).is_err());
}

fn small_case() -> impl Strategy<Value = (FamilyKind, usize)> {
    prop_oneof![
        Just((FamilyKind::Cq, 2)),
        Just((FamilyKind::Cq, 3)),
        Just((FamilyKind::Sq, 2)),
        Just((FamilyKind::Sq, 3)),
        Just((FamilyKind::P2m, 2)),
        Just((FamilyKind::Iq16, 2)),
        Just((FamilyKind::Ip8, 2)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // |θ| is unchanged by a global i-rotation of either sequence. For CQ that means adding
    // the same amount to every κ_k; elsewhere κ_0 alone rotates.
    #[test]
    fn kappa0_rotation_preserves_correlation(
        (kind, m) in small_case(),
        seed in any::<u64>(),
        rot in 1u8..4,
    ) {
        let f = fam(4, kind, m);
        let users = f.num_users();
        let (a, b) = ((seed % users as u64) as usize, ((seed >> 8) % users as u64) as usize);
        let wa = f.data_space(a).words();
        let wb = f.data_space(b).words();
        let ka = wa[(seed >> 16) as usize % wa.len()].clone();
        let kb = wb[(seed >> 32) as usize % wb.len()].clone();
        let mut ka_rot = ka.clone();
        let rotated = if kind == FamilyKind::Cq { m } else { 1 };
        for k in &mut ka_rot[..rotated] {
            *k = (*k + rot) % 4;
        }
        let (sa, sb, sr) = (f.modulate(a, &ka).unwrap(), f.modulate(b, &kb).unwrap(), f.modulate(a, &ka_rot).unwrap());
        for tau in 0..f.period() {
            let x = cross_correlation(&sa, &sb, tau).unwrap();
            let y = cross_correlation(&sr, &sb, tau).unwrap();
            prop_assert_eq!(x.norm_sqr(), y.norm_sqr());
        }
    }
}
