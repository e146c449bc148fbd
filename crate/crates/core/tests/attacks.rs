use pcw_core::attacks::{field_based_attack, lba, AttackError, LbaConfig, Side};
use pcw_core::linalg::QMatrix;
use pcw_core::pc::random_element;
use pcw_core::platform::{heisenberg, quartic_field, unitriangular, zsqrt2};
use pcw_core::protocols::aag::{aag_run, aag_session, AagParams, AagTranscript, KeyFactor};
use pcw_core::{GroupElement, PlatformGroup, SeededRng};

fn kf(index: usize, sign: i8) -> KeyFactor {
    KeyFactor { index, sign }
}

/// AAG transcript with public sets drawn at random and the given keys.
fn planted(g: &PlatformGroup, seed: u64, alice: Vec<KeyFactor>, bob: Vec<KeyFactor>) -> AagTranscript {
    let p = g.presentation();
    let mut rng = SeededRng::new(seed);
    let mut draw = |n: usize| -> Vec<GroupElement> { (0..n).map(|_| random_element(p, 2, 4, &mut rng).unwrap().1).collect() };
    let a_bar = draw(5);
    let b_bar = draw(5);
    aag_session(g, AagParams::new(5, 5, 2, 4, 4).unwrap(), a_bar, b_bar, alice, bob).unwrap()
}

fn params() -> AagParams {
    AagParams::new(5, 5, 2, 4, 4).unwrap()
}

#[test]
fn lba_recovers_length_one_keys() {
    let g = unitriangular(4).unwrap();
    for (seed, (i, s)) in [(0, 1), (3, -1), (4, 1)].into_iter().enumerate() {
        let t = planted(&g, seed as u64, vec![kf(i, s)], vec![kf(1, 1), kf(2, 1), kf(0, -1)]);
        let r = lba(&t.public, &LbaConfig::default()).unwrap();
        assert!(r.is_success());
        assert!(r.expansions <= 2 * 5);
        assert_eq!(r.key(), Some(t.shared_key()));

        let bob = LbaConfig {
            side: Side::Bob,
            ..LbaConfig::default()
        };
        let t = planted(&g, seed as u64 + 10, vec![kf(1, 1), kf(2, 1), kf(0, -1)], vec![kf(i, s)]);
        let r = lba(&t.public, &bob).unwrap();
        assert!(r.expansions <= 2 * 5);
        assert_eq!(r.key(), Some(t.shared_key()));
    }
}

#[test]
fn lba_identity_key_is_immediate() {
    let g = heisenberg();
    let t = planted(&g, 1, vec![kf(2, 1), kf(2, -1)], vec![kf(0, 1), kf(1, 1)]);
    assert!(t.private.alice_secret.is_identity());
    let r = lba(&t.public, &LbaConfig::default()).unwrap();
    assert!(r.is_success());
    assert_eq!((r.iterations, r.expansions), (0, 0));
    assert!(r.key().unwrap().is_identity());
}

#[test]
fn lba_campaign_successes_reverify() {
    let g = unitriangular(4).unwrap();
    let cfg = LbaConfig::default();
    let mut successes = 0;
    for seed in 1..=10 {
        let t = aag_run(&g, params(), &mut SeededRng::new(seed)).unwrap();
        let r = lba(&t.public, &cfg).unwrap();
        assert!(r.peak_kept <= cfg.memory);
        if let Some(k) = r.key() {
            successes += 1;
            assert_eq!(k, t.shared_key());
        }
    }
    assert!(successes > 0);
}

#[test]
fn lba_is_deterministic_and_bounded() {
    let g = heisenberg();
    let t = aag_run(&g, params(), &mut SeededRng::new(2)).unwrap();
    for memory in 1..=3 {
        let cfg = LbaConfig {
            memory,
            max_iterations: 200,
            ..LbaConfig::default()
        };
        let r = lba(&t.public, &cfg).unwrap();
        assert_eq!(lba(&t.public, &cfg).unwrap(), r);
        assert!(r.peak_kept <= memory);
        assert!(r.peak_candidates <= memory * 10);
    }
    let zero = LbaConfig {
        max_iterations: 0,
        ..LbaConfig::default()
    };
    assert!(!lba(&t.public, &zero).unwrap().is_success());
    let no_memory = LbaConfig {
        memory: 0,
        ..LbaConfig::default()
    };
    assert!(matches!(lba(&t.public, &no_memory), Err(AttackError::BadTranscript(_))));
}

#[test]
fn field_attack_identity_conjugator() {
    let g = zsqrt2();
    let t = planted(&g, 5, vec![kf(0, 1), kf(0, -1)], vec![kf(1, 1), kf(3, -1)]);
    let rep = g.matrix_image().unwrap();
    let r = field_based_attack(&t.public, rep, g.presentation()).unwrap();
    assert!(r.key_matrix.is_identity());
    assert!(r.key.unwrap().is_identity());
    // X = I solves the system when a' = a
    let dim = rep.dim();
    let id = QMatrix::identity(dim);
    for a in &t.public.a_bar {
        let m = g.matrix_of(a).unwrap();
        assert_eq!(m.matmul(&id), id.matmul(&m));
    }
}

fn field_campaign(g: &PlatformGroup, seeds: std::ops::Range<u64>) -> (usize, usize) {
    let rep = g.matrix_image().unwrap();
    let (mut ok, mut singular) = (0, 0);
    for seed in seeds {
        let t = aag_run(g, params(), &mut SeededRng::new(seed)).unwrap();
        match field_based_attack(&t.public, rep, g.presentation()) {
            Ok(r) => {
                assert_eq!(r.key.as_ref(), Some(t.shared_key()), "wrong key for seed {seed}");
                assert_eq!(r.key_matrix, g.matrix_of(t.shared_key()).unwrap());
                ok += 1;
            }
            Err(AttackError::SingularSystem) => singular += 1,
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    (ok, singular)
}

#[test]
fn field_attack_recovers_honest_keys() {
    let (ok, _) = field_campaign(&zsqrt2(), 0..20);
    assert!(ok >= 19);
    let g = quartic_field();
    assert_eq!(g.hirsch_length(), 7);
    let (ok, _) = field_campaign(&g, 0..20);
    assert!(ok >= 19);
}

#[test]
fn field_attack_needs_a_matching_rep() {
    let g = zsqrt2();
    let t = aag_run(&g, params(), &mut SeededRng::new(0)).unwrap();
    let other = heisenberg();
    assert!(field_based_attack(&t.public, other.matrix_image().unwrap(), g.presentation()).is_err());
}
