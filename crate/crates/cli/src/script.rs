//! Move scripts: one move per line, `#` starts a comment.
//!
//! ```text
//! quad 135        quadrilateral move at the face labelled {1,3,5}
//! blowup 7 0 2    split vertex 7, moving 2 edges starting at rotation slot 0
//! blowdown 12     contract the degree-two vertex 12
//! ```

use std::fmt;

use dimertwist::combinatorics::KSubset;
use dimertwist::plabic::{blow_down, blow_up, quad_move_at_label, PlabicGraph};

use crate::Failure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Quad(String),
    BlowUp {
        vertex: usize,
        start: usize,
        len: usize,
    },
    BlowDown(usize),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Quad(label) => write!(f, "quad {label}"),
            Move::BlowUp { vertex, start, len } => write!(f, "blowup {vertex} {start} {len}"),
            Move::BlowDown(v) => write!(f, "blowdown {v}"),
        }
    }
}

fn number(word: Option<&str>, line_no: usize) -> Result<usize, Failure> {
    let word = word.ok_or_else(|| Failure::Input(format!("line {line_no}: missing argument")))?;
    word.parse()
        .map_err(|_| Failure::Input(format!("line {line_no}: `{word}` is not a number")))
}

/// Parses a script into moves tagged with their 1-based line numbers.
pub fn parse(text: &str) -> Result<Vec<(usize, Move)>, Failure> {
    let mut moves = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let op = words.next().unwrap_or_default();
        let mv = match op {
            "quad" => {
                let rest: Vec<&str> = words.by_ref().collect();
                if rest.is_empty() {
                    return Err(Failure::Input(format!(
                        "line {line_no}: quad needs a face label"
                    )));
                }
                Move::Quad(rest.join(" "))
            }
            "blowup" => Move::BlowUp {
                vertex: number(words.next(), line_no)?,
                start: number(words.next(), line_no)?,
                len: number(words.next(), line_no)?,
            },
            "blowdown" => Move::BlowDown(number(words.next(), line_no)?),
            other => {
                return Err(Failure::Input(format!(
                    "line {line_no}: unknown move `{other}`"
                )))
            }
        };
        if words.next().is_some() {
            return Err(Failure::Input(format!(
                "line {line_no}: trailing arguments"
            )));
        }
        moves.push((line_no, mv));
    }
    Ok(moves)
}

pub fn apply(g: &PlabicGraph, mv: &Move) -> dimertwist::Result<PlabicGraph> {
    match mv {
        Move::Quad(label) => Ok(quad_move_at_label(g, &KSubset::parse(g.n(), label)?)?.graph),
        Move::BlowUp { vertex, start, len } => {
            if *vertex >= g.vertices().len() {
                return Err(dimertwist::Error::InvalidMove(format!(
                    "no vertex {vertex}"
                )));
            }
            Ok(blow_up(g, *vertex, *start, *len)?.0)
        }
        Move::BlowDown(v) => {
            if *v >= g.vertices().len() {
                return Err(dimertwist::Error::InvalidMove(format!("no vertex {v}")));
            }
            Ok(blow_down(g, *v)?.graph)
        }
    }
}
