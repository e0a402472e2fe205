//! The 78 strictly ordinal 2x2 games, canonical forms and game classes.

use std::cmp::Ordering;

use super::{transpose, Game, PayoffMatrix, PAYOFF_TOL};
use crate::error::{Error, Result};

/// One of the 8 symmetries of a 2x2 bimatrix game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transform {
    pub swap_rows: bool,
    pub swap_cols: bool,
    pub swap_players: bool,
}

impl Transform {
    pub fn all() -> impl Iterator<Item = Transform> {
        (0..8u8).map(|m| Transform {
            swap_rows: m & 1 != 0,
            swap_cols: m & 2 != 0,
            swap_players: m & 4 != 0,
        })
    }
}

fn swap_rows(m: &PayoffMatrix) -> PayoffMatrix {
    [m[1], m[0]]
}

fn swap_cols(m: &PayoffMatrix) -> PayoffMatrix {
    [[m[0][1], m[0][0]], [m[1][1], m[1][0]]]
}

/// Applies a relabelling of rows, columns and/or seats.
pub fn transform(g: &Game, t: Transform) -> Game {
    let (mut a, mut b) = (g.payoffs_i, g.payoffs_j);
    if t.swap_rows {
        a = swap_rows(&a);
        b = swap_rows(&b);
    }
    if t.swap_cols {
        a = swap_cols(&a);
        b = swap_cols(&b);
    }
    if t.swap_players {
        // The new row player is the old column player.
        let (na, nb) = (transpose(&b), transpose(&a));
        a = na;
        b = nb;
    }
    Game {
        label: g.label.clone(),
        payoffs_i: a,
        payoffs_j: b,
    }
}

fn cmp_flat(a: &[f64; 8], b: &[f64; 8]) -> Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// The lexicographically smallest of the 8 transforms of `g`.
pub fn canonical_form(g: &Game) -> Game {
    Transform::all()
        .map(|t| transform(g, t))
        .min_by(|x, y| cmp_flat(&x.flatten(), &y.flatten()))
        .expect("8 transforms")
}

fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn as_matrix(p: &[f64]) -> PayoffMatrix {
    [[p[0], p[1]], [p[2], p[3]]]
}

/// All 4! x 4! = 576 assignments of ranks 1..4 to the cells, for both players.
pub fn ordinal_games() -> Vec<Game> {
    let perms = permutations(&[1.0, 2.0, 3.0, 4.0]);
    let mut out = Vec::with_capacity(perms.len() * perms.len());
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            out.push(Game {
                label: format!("ord-{a:02}-{b:02}"),
                payoffs_i: as_matrix(pa),
                payoffs_j: as_matrix(pb),
            });
        }
    }
    out
}

/// The distinct strictly ordinal 2x2 games, sorted by canonical tuple and
/// labelled `RG-01`..`RG-78`.
pub fn enumerate_rapoport_guyer() -> Vec<Game> {
    let mut canon: Vec<Game> = ordinal_games().iter().map(canonical_form).collect();
    canon.sort_by(|x, y| cmp_flat(&x.flatten(), &y.flatten()));
    canon.dedup_by(|x, y| cmp_flat(&x.flatten(), &y.flatten()) == Ordering::Equal);
    for (k, g) in canon.iter_mut().enumerate() {
        g.label = format!("RG-{:02}", k + 1);
    }
    canon
}

fn argmax_cell(m: &PayoffMatrix, label: &str) -> Result<(usize, usize)> {
    let cells: Vec<(usize, usize, f64)> = (0..2)
        .flat_map(|r| (0..2).map(move |c| (r, c)))
        .map(|(r, c)| (r, c, m[r][c]))
        .collect();
    for (k, a) in cells.iter().enumerate() {
        for b in &cells[k + 1..] {
            if (a.2 - b.2).abs() <= PAYOFF_TOL {
                return Err(Error::Game(format!("{label}: payoff tie, game is not strictly ordinal")));
            }
        }
    }
    let best = cells
        .iter()
        .max_by(|a, b| a.2.total_cmp(&b.2))
        .expect("four cells");
    Ok((best.0, best.1))
}

/// True iff both players' most preferred outcome is the same cell.
pub fn classify_no_conflict(g: &Game) -> Result<bool> {
    Ok(argmax_cell(&g.payoffs_i, &g.label)? == argmax_cell(&g.payoffs_j, &g.label)?)
}

/// Maps ordinal ranks {1,2,3,4} onto {0, 1/3, 2/3, 1}.
pub fn normalize_payoffs(g: &Game) -> Result<Game> {
    let map = |m: &PayoffMatrix| -> Result<PayoffMatrix> {
        let mut out = *m;
        for v in out.iter_mut().flatten() {
            let rank = v.round();
            if (*v - rank).abs() > PAYOFF_TOL || !(1.0..=4.0).contains(&rank) {
                return Err(Error::Game(format!("{}: payoff {v} is not an ordinal rank", g.label)));
            }
            *v = (rank - 1.0) / 3.0;
        }
        Ok(out)
    };
    Ok(Game {
        label: g.label.clone(),
        payoffs_i: map(&g.payoffs_i)?,
        payoffs_j: map(&g.payoffs_j)?,
    })
}
