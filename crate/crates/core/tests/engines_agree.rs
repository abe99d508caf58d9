mod common;

use common::{iterative_oracle, parse_moves, GOLDEN_N5_WORD};
use hanoi_formal::constructions::{bfs_optimal, solve, solve_uncapped, Engine, HanoiInstance};
use hanoi_formal::hanoi::{HanoiError, Replay};
use hanoi_formal::{recursive_solve, validate_sequence, HanoiState, MoveSymbol};
use proptest::prelude::*;

#[test]
fn recursive_examples() {
    let word = recursive_solve(&HanoiInstance::new(5).unwrap());
    assert_eq!(word, parse_moves(GOLDEN_N5_WORD));
}

#[test]
fn three_way_agreement() {
    for n in 1..=12 {
        let grammar = solve(Engine::Grammar, n).unwrap();
        assert_eq!(solve(Engine::Pda, n).unwrap(), grammar, "N = {n}");
        assert_eq!(solve(Engine::Recursive, n).unwrap(), grammar, "N = {n}");
        assert_eq!(iterative_oracle(n), grammar, "N = {n}");
    }
}

#[test]
fn bfs_examples() {
    let three = bfs_optimal(3).unwrap();
    assert_eq!(three.moves.len(), 7);
    assert_eq!(three.shortest_path_count, 1);
    assert_eq!(three.states_explored, 27);
    assert_eq!(bfs_optimal(8).unwrap().moves.len(), 255);
}

#[test]
fn bfs_certifies_minimal_unique_solution() {
    for n in 1..=8 {
        let bfs = bfs_optimal(n).unwrap();
        assert_eq!(bfs.moves.len() as u64, (1u64 << n) - 1, "N = {n}");
        assert_eq!(bfs.shortest_path_count, 1, "N = {n}");
        assert_eq!(bfs.moves, solve(Engine::Grammar, n).unwrap(), "N = {n}");
    }
}

#[test]
fn every_engine_output_validates() {
    for n in 1..=16 {
        for engine in [Engine::Grammar, Engine::Pda, Engine::Recursive] {
            let moves = solve(engine, n).unwrap();
            let report = validate_sequence(n, &moves).unwrap();
            assert!(report.legal && report.final_solved, "{engine} N = {n}");
            assert_eq!(report.moves_checked, moves.len());
        }
    }
}

#[test]
fn proper_prefixes_are_legal_but_unsolved() {
    for n in 1..=10 {
        let moves = solve(Engine::Grammar, n).unwrap();
        let mut replay = Replay::new(n).unwrap();
        assert!(!replay.state().is_solved(n).unwrap());
        for (i, &m) in moves.iter().enumerate() {
            replay.push(m).unwrap();
            let solved = replay.state().is_solved(n).unwrap();
            assert_eq!(solved, i + 1 == moves.len(), "N = {n}, after {} moves", i + 1);
        }
    }
}

#[test]
fn uncapped_solve() {
    assert!(solve(Engine::Bfs, 11).is_err());
    assert_eq!(
        solve_uncapped(Engine::Bfs, 11).unwrap(),
        solve(Engine::Recursive, 11).unwrap()
    );
    assert_eq!(solve_uncapped(Engine::Recursive, 3).unwrap().len(), 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_walks_keep_state_invariants(n in 1u32..=7, picks in prop::collection::vec(0usize..6, 1..120)) {
        let mut state = HanoiState::initial(n).unwrap();
        let mut trail = Vec::new();
        for pick in picks {
            for mv in MoveSymbol::all() {
                let legal = state.legal_moves().any(|m| m == mv);
                match state.apply_move(mv) {
                    Ok(next) => {
                        prop_assert!(legal);
                        prop_assert!(next.check_invariants().is_ok());
                    }
                    Err(HanoiError::EmptySource { peg }) => {
                        prop_assert!(!legal);
                        prop_assert_eq!(peg, mv.from());
                        prop_assert!(state.peg(peg).is_empty());
                    }
                    Err(HanoiError::LargerOnSmaller { disc, onto }) => {
                        prop_assert!(!legal);
                        prop_assert!(disc > onto);
                    }
                    Err(other) => prop_assert!(false, "unexpected error {other}"),
                }
            }
            let legal: Vec<_> = state.legal_moves().collect();
            let mv = legal[pick % legal.len()];
            state = state.apply_move(mv).unwrap();
            trail.push(mv);
        }
        let report = validate_sequence(n, &trail).unwrap();
        prop_assert!(report.legal);
        prop_assert_eq!(report.final_solved, state.is_solved(n).unwrap());
    }
}
