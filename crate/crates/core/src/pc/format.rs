//! Text format for presentations:
//!
//! ```text
//! pcgroup v1
//! ngens 3
//! order 1 5            # absent => infinite
//! conj + 1 2 g2^1 g3^1 # g2^(g1) = g2 g3
//! conj - 1 2 g2^1 g3^-1
//! pow 1 g3^1           # g1^5 = g3
//! ```
//!
//! Indices are 1-based. `#` starts a comment. Absent conjugation relations
//! mean the two generators commute; absent power words are trivial.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::word::Word;
use super::{PcError, PcPresentation};

pub const HEADER: &str = "pcgroup v1";

fn err(line: usize, msg: impl Into<String>) -> PcError {
    PcError::Parse {
        line,
        msg: msg.into(),
    }
}

fn index(tok: Option<&str>, line: usize, ngens: usize, what: &str) -> Result<usize, PcError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    let k: usize = tok
        .parse()
        .map_err(|_| err(line, format!("bad {what} `{tok}`")))?;
    if k == 0 || k > ngens {
        return Err(err(line, format!("{what} {k} out of range 1..={ngens}")));
    }
    Ok(k - 1)
}

pub fn parse_presentation(text: &str) -> Result<PcPresentation, PcError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty presentation file"))?;
    if header != HEADER {
        return Err(err(ln, format!("expected header `{HEADER}`")));
    }
    let (ln, ngens_line) = lines.next().ok_or_else(|| err(ln + 1, "missing `ngens` line"))?;
    let ngens: usize = match ngens_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["ngens", n] => n.parse().map_err(|_| err(ln, format!("bad generator count `{n}`")))?,
        _ => return Err(err(ln, "expected `ngens N`")),
    };

    let mut b = PcPresentation::builder(ngens);
    let mut seen = HashSet::new();
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let kw = toks.next().expect("non-empty line");
        match kw {
            "order" => {
                let i = index(toks.next(), ln, ngens, "generator index")?;
                let r = toks
                    .next()
                    .ok_or_else(|| err(ln, "missing relative order"))?;
                let r: u64 = r
                    .parse()
                    .map_err(|_| err(ln, format!("bad relative order `{r}`")))?;
                if toks.next().is_some() {
                    return Err(err(ln, "trailing tokens after order"));
                }
                if !seen.insert(("order", i, 0)) {
                    return Err(err(ln, format!("duplicate order for g{}", i + 1)));
                }
                b.order(i, r).map_err(|e| err(ln, e.to_string()))?;
            }
            "conj" => {
                let sign = toks.next().ok_or_else(|| err(ln, "missing sign"))?;
                let positive = match sign {
                    "+" => true,
                    "-" => false,
                    s => return Err(err(ln, format!("expected `+` or `-`, got `{s}`"))),
                };
                let i = index(toks.next(), ln, ngens, "generator index")?;
                let j = index(toks.next(), ln, ngens, "generator index")?;
                let w: Word = toks
                    .collect::<Vec<_>>()
                    .join(" ")
                    .parse()
                    .map_err(|e| err(ln, format!("{e}")))?;
                if let Some(g) = w.max_gen() {
                    if g >= ngens {
                        return Err(err(ln, format!("word uses g{} beyond ngens {ngens}", g + 1)));
                    }
                }
                let key = if positive { "conj+" } else { "conj-" };
                if !seen.insert((key, i, j)) {
                    return Err(err(ln, format!("duplicate relation conj {sign} {} {}", i + 1, j + 1)));
                }
                b.conj(i, j, positive, w).map_err(|e| err(ln, e.to_string()))?;
            }
            "pow" => {
                let i = index(toks.next(), ln, ngens, "generator index")?;
                let w: Word = toks
                    .collect::<Vec<_>>()
                    .join(" ")
                    .parse()
                    .map_err(|e| err(ln, format!("{e}")))?;
                if let Some(g) = w.max_gen() {
                    if g >= ngens {
                        return Err(err(ln, format!("word uses g{} beyond ngens {ngens}", g + 1)));
                    }
                }
                if !seen.insert(("pow", i, 0)) {
                    return Err(err(ln, format!("duplicate power relation for g{}", i + 1)));
                }
                b.power(i, w).map_err(|e| err(ln, e.to_string()))?;
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    b.build()
}

pub fn write_presentation(p: &PcPresentation) -> String {
    let mut s = String::new();
    let n = p.ngens();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "ngens {n}").unwrap();
    for i in 0..n {
        if let Some(r) = p.order(i) {
            writeln!(s, "order {} {r}", i + 1).unwrap();
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for (positive, sign) in [(true, '+'), (false, '-')] {
                if p.has_nontrivial_conj(i, j, positive) {
                    writeln!(s, "conj {sign} {} {} {}", i + 1, j + 1, p.conj(i, j, positive)).unwrap();
                }
            }
        }
    }
    for i in 0..n {
        if let Some(w) = p.power(i) {
            if !w.is_empty() {
                writeln!(s, "pow {} {w}", i + 1).unwrap();
            }
        }
    }
    s
}
