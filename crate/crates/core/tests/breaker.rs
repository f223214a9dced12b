mod common;

use std::collections::BTreeSet;

use common::board;
use hamgame::breaker::BreakerView;
use hamgame::config::StrategyCoeffs;
use hamgame::sim::{stream_rng, BREAKER_STREAM, MAKER_STREAM};
use hamgame::{BreakerKind, BreakerPolicy, GameConfig, GameError, GameState, MakerState, PathSystem, Player, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Side {
    ps: PathSystem,
    maker: MakerState,
}

fn side(n: usize, b: usize) -> Side {
    let cfg = GameConfig::scaled(n, b, StrategyCoeffs::default(), 0);
    let s0: Vec<Vertex> = vec![0, 1];
    Side {
        ps: PathSystem::new(n, &s0).unwrap(),
        maker: MakerState::new(&cfg, s0, stream_rng(0, MAKER_STREAM)),
    }
}

fn play(policy: &mut BreakerPolicy, st: &mut GameState, sd: &Side, rng: &mut ChaCha8Rng) -> Result<Vec<(Vertex, Vertex)>, GameError> {
    let view = BreakerView { ps: &sd.ps, maker: &sd.maker };
    let rec = policy.breaker_turn(st, view, rng)?;
    assert_eq!(rec.player, Player::Breaker);
    Ok(rec.edges.iter().map(|e| e.key()).collect())
}

#[test]
fn random_is_seeded_and_claims_b_distinct_pairs() {
    let sd = side(30, 6);
    let run = |seed| {
        let mut st = GameState::empty(30, 6, 10);
        let mut rng = stream_rng(seed, BREAKER_STREAM);
        play(&mut BreakerPolicy::new(BreakerKind::Random), &mut st, &sd, &mut rng).unwrap()
    };
    let a = run(5);
    assert_eq!(a, run(5));
    assert_ne!(a, run(6));
    assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), 6);
}

#[test]
fn claims_stop_when_pairs_run_out() {
    // K_7 has 21 pairs; leave exactly 3 unclaimed, then ask for b = 5
    let breaker: Vec<(Vertex, Vertex)> = (0..7u32)
        .flat_map(|a| (a + 1..7).map(move |c| (a, c)))
        .filter(|&(a, _)| a >= 1)
        .take(15)
        .collect();
    let mut st = board(7, 5, 6, &[(0, 1), (0, 2)], &breaker);
    st.claim_edge(Player::Maker, 0, 3).unwrap();
    assert_eq!(st.unclaimed_count(), 3);
    let sd = side(7, 5);
    for kind in [BreakerKind::Random, BreakerKind::Isolator, BreakerKind::MaxDanger, BreakerKind::PairKiller] {
        let mut s = st.clone();
        let got = play(&mut BreakerPolicy::new(kind), &mut s, &sd, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(got.len(), 3, "{kind}");
        assert_eq!(s.unclaimed_count(), 0);
        assert_eq!(s.mover(), Player::Maker);
    }
}

#[test]
fn isolator_concentrates_on_one_vertex() {
    let sd = side(20, 3);
    let mut st = GameState::empty(20, 3, 10);
    let got = play(&mut BreakerPolicy::new(BreakerKind::Isolator), &mut st, &sd, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    assert!(got.iter().all(|&(a, _)| a == 0), "{got:?}");
}

#[test]
fn isolator_finishes_a_star_against_a_passive_maker() {
    // Maker never touches vertex 0, so 0 stays the target until isolated
    let (n, b) = (25usize, 4usize);
    let sd = side(n, b);
    let mut st = GameState::empty(n, b, 100);
    let mut policy = BreakerPolicy::new(BreakerKind::Isolator);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let turns = (n - 1).div_ceil(b);
    for _ in 0..turns {
        play(&mut policy, &mut st, &sd, &mut rng).unwrap();
        let (u, v) = loop {
            let u = rng.gen_range(1..n as Vertex);
            let v = rng.gen_range(1..n as Vertex);
            if u != v && st.is_unclaimed(u, v) {
                break (u, v);
            }
        };
        st.claim_edge(Player::Maker, u, v).unwrap();
    }
    assert_eq!(st.d_b(0), n as u32 - 1);
}

#[test]
fn max_danger_starts_at_the_most_dangerous_vertex() {
    let mut st = board(20, 4, 10, &[], &[(7, 1), (7, 2), (7, 3), (7, 4)]);
    st.claim_edge(Player::Maker, 10, 11).unwrap();
    let sd = side(20, 4);
    assert!((0..20).all(|v| v == 7 || st.danger(v) < st.danger(7)));
    let got = play(&mut BreakerPolicy::new(BreakerKind::MaxDanger), &mut st, &sd, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!(got[0].0 == 7 || got[0].1 == 7);
}

#[test]
fn scripted_conflict_is_reported() {
    let sd = side(6, 1);
    let mut st = board(6, 1, 4, &[(0, 1)], &[]);
    st.claim_edge(Player::Maker, 1, 2).unwrap();
    // turn 3 tries to take Maker's pair 0-1
    let mut policy = BreakerPolicy::scripted(vec![vec![], vec![(2, 3)], vec![(1, 0)]]);
    match play(&mut policy, &mut st, &sd, &mut ChaCha8Rng::seed_from_u64(0)) {
        Err(GameError::ReplayConflict { turn, .. }) => assert_eq!(turn, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn script_past_its_end_claims_nothing() {
    let sd = side(6, 1);
    let mut st = GameState::empty(6, 1, 4);
    let got = play(&mut BreakerPolicy::scripted(vec![]), &mut st, &sd, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!(got.is_empty());
    assert_eq!(st.mover(), Player::Maker);
}

#[test]
fn kinds_parse_by_name() {
    for kind in BreakerKind::ALL_ADAPTIVE {
        assert_eq!(kind.name().parse::<BreakerKind>().unwrap(), kind);
    }
    assert!("bogus".parse::<BreakerKind>().is_err());
}

proptest! {
    #[test]
    fn every_policy_claims_its_bias(seed in any::<u64>(), n in 6usize..30, which in 0usize..4) {
        let kind = BreakerKind::ALL_ADAPTIVE[which];
        let b = 1 + (seed % (n as u64 - 2)) as usize;
        let sd = side(n, b);
        let mut st = GameState::empty(n, b, 3);
        let mut policy = BreakerPolicy::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            if st.unclaimed_count() == 0 {
                break;
            }
            let before = st.unclaimed_count();
            let got = play(&mut policy, &mut st, &sd, &mut rng).unwrap();
            prop_assert_eq!(got.len(), b.min(before));
            st.refresh_troublesome();
            let free: Vec<usize> = (0..st.pair_count()).filter(|&i| st.owner_at(i) == hamgame::Owner::Unclaimed).collect();
            if free.is_empty() {
                break;
            }
            let (u, v) = hamgame::board::pair_from_index(free[rng.gen_range(0..free.len())]);
            st.claim_edge(Player::Maker, u, v).unwrap();
        }
        prop_assert_eq!(st.recount_mismatch(), None);
    }
}
