#![allow(dead_code)]

use hanoi_formal::MoveSymbol;

pub const GOLDEN_N5_WORD: &str = include_str!("../../../../golden/hanoi_n5.txt");

pub fn parse_moves(text: &str) -> Vec<MoveSymbol> {
    text.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

/// Iterative solver used as an oracle: the smallest disc cycles in a fixed
/// direction on odd steps, and on even steps the only legal move that does
/// not involve the smallest disc is made. Shares no code with the library.
pub fn iterative_oracle(n: u32) -> Vec<MoveSymbol> {
    let mut pegs: [Vec<u32>; 3] = [(1..=n).rev().collect(), vec![], vec![]];
    let cycle: [usize; 3] = if n % 2 == 1 { [0, 2, 1] } else { [0, 1, 2] };
    let mut small_at = 0usize;
    let total = (1u64 << n) - 1;
    let mut out = Vec::with_capacity(total as usize);
    let code = |a: usize, b: usize| format!("p{}{}", a + 1, b + 1).parse::<MoveSymbol>().unwrap();
    for step in 0..total {
        if step % 2 == 0 {
            let pos = cycle.iter().position(|&p| p == small_at).unwrap();
            let to = cycle[(pos + 1) % 3];
            pegs[small_at].pop();
            pegs[to].push(1);
            out.push(code(small_at, to));
            small_at = to;
        } else {
            let others: Vec<usize> = (0..3).filter(|&p| p != small_at).collect();
            let (a, b) = (others[0], others[1]);
            let (from, to) = match (pegs[a].last(), pegs[b].last()) {
                (Some(x), Some(y)) if x < y => (a, b),
                (Some(_), Some(_)) => (b, a),
                (Some(_), None) => (a, b),
                (None, Some(_)) => (b, a),
                (None, None) => unreachable!("two empty pegs mid-solution"),
            };
            let d = pegs[from].pop().unwrap();
            pegs[to].push(d);
            out.push(code(from, to));
        }
    }
    out
}
