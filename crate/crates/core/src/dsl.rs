//! A small construction language for varieties and its evaluator.
//!
//! ```text
//! expr := "point"
//!       | "P(" int ")"
//!       | "curve(" int ")"
//!       | "prod(" expr "," expr ")"
//!       | "projbundle(" expr "," "rank=" int ")"
//!       | "blowup(" expr "," expr "," "codim=" int ")"
//! ```
//!
//! Whitespace is allowed between any two tokens. Integers are unsigned
//! decimals. `rank=` and `codim=` are mandatory.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::constructors::{blow_up, curve, point, product, projective_bundle, projective_space};
use crate::grid::{Characteristic, HodgeGrid};

/// Largest variety dimension the evaluator will build a grid for.
pub const MAX_EVAL_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarietyExpr {
    Point,
    Projective(u32),
    Curve(BigUint),
    Product(Box<VarietyExpr>, Box<VarietyExpr>),
    ProjBundle {
        base: Box<VarietyExpr>,
        rank: u32,
    },
    BlowUp {
        ambient: Box<VarietyExpr>,
        center: Box<VarietyExpr>,
        codim: u32,
    },
}

impl fmt::Display for VarietyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyExpr::Point => f.write_str("point"),
            VarietyExpr::Projective(n) => write!(f, "P({n})"),
            VarietyExpr::Curve(g) => write!(f, "curve({g})"),
            VarietyExpr::Product(a, b) => write!(f, "prod({a}, {b})"),
            VarietyExpr::ProjBundle { base, rank } => write!(f, "projbundle({base}, rank={rank})"),
            VarietyExpr::BlowUp {
                ambient,
                center,
                codim,
            } => write!(f, "blowup({ambient}, {center}, codim={codim})"),
        }
    }
}

/// Parse failure. Positions are byte offsets into the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "error", rename_all = "lowercase")]
pub enum ParseError {
    Lexical {
        pos: usize,
        found: char,
    },
    Syntax {
        pos: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    Semantic {
        pos: usize,
        message: String,
    },
}

impl ParseError {
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Lexical { .. } => "lexical",
            ParseError::Syntax { .. } => "syntax",
            ParseError::Semantic { .. } => "semantic",
        }
    }

    pub fn pos(&self) -> usize {
        match self {
            ParseError::Lexical { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Semantic { pos, .. } => *pos,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Lexical { pos, found } => {
                write!(f, "lexical error at {pos}: unexpected character {found:?}")
            }
            ParseError::Syntax {
                pos,
                expected,
                found,
            } => write!(
                f,
                "syntax error at {pos}: expected one of [{}], found {found}",
                expected.join(", ")
            ),
            ParseError::Semantic { pos, message } => {
                write!(f, "semantic error at {pos}: {message}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    Equals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("{w:?}"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::LParen => "\"(\"".to_string(),
            Tok::RParen => "\")\"".to_string(),
            Tok::Comma => "\",\"".to_string(),
            Tok::Equals => "\"=\"".to_string(),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' | '=' => {
                chars.next();
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Equals,
                };
                out.push((pos, tok));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                out.push((pos, Tok::Int(s)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                out.push((pos, Tok::Word(s)));
            }
            other => return Err(ParseError::Lexical { pos, found: other }),
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

const EXPR_START: &[&str] = &["point", "P", "curve", "prod", "projbundle", "blowup"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, expected: &[&'static str]) -> ParseError {
        let (pos, tok) = self.peek();
        ParseError::Syntax {
            pos: *pos,
            expected: expected.to_vec(),
            found: tok.describe(),
        }
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<usize, ParseError> {
        if self.peek().1 == want {
            Ok(self.bump().0)
        } else {
            Err(self.syntax(&[label]))
        }
    }

    fn keyword(&mut self, word: &'static str) -> Result<(), ParseError> {
        match &self.peek().1 {
            Tok::Word(w) if w == word => {
                self.bump();
                Ok(())
            }
            _ => Err(self.syntax(&[word])),
        }
    }

    fn int(&mut self) -> Result<(usize, String), ParseError> {
        match self.peek().clone() {
            (pos, Tok::Int(s)) => {
                self.bump();
                Ok((pos, s))
            }
            _ => Err(self.syntax(&["integer"])),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<(usize, u32), ParseError> {
        let (pos, s) = self.int()?;
        let v = s.parse::<u32>().map_err(|_| ParseError::Semantic {
            pos,
            message: format!("{what} {s} is too large"),
        })?;
        Ok((pos, v))
    }

    fn named_int(&mut self, name: &'static str) -> Result<(usize, u32), ParseError> {
        self.keyword(name)?;
        self.expect(Tok::Equals, "=")?;
        self.small_int(name)
    }

    fn expr(&mut self) -> Result<VarietyExpr, ParseError> {
        let word = match &self.peek().1 {
            Tok::Word(w) if EXPR_START.contains(&w.as_str()) => w.clone(),
            _ => return Err(self.syntax(EXPR_START)),
        };
        self.bump();
        if word == "point" {
            return Ok(VarietyExpr::Point);
        }
        self.expect(Tok::LParen, "(")?;
        let e = match word.as_str() {
            "P" => {
                let (pos, n) = self.small_int("projective dimension")?;
                if n < 1 {
                    return Err(ParseError::Semantic {
                        pos,
                        message: "projective space needs dimension at least 1".to_string(),
                    });
                }
                VarietyExpr::Projective(n)
            }
            "curve" => {
                let (_, s) = self.int()?;
                VarietyExpr::Curve(s.parse().expect("lexer yields decimal digits"))
            }
            "prod" => {
                let a = self.expr()?;
                self.expect(Tok::Comma, ",")?;
                let b = self.expr()?;
                VarietyExpr::Product(Box::new(a), Box::new(b))
            }
            "projbundle" => {
                let base = self.expr()?;
                self.expect(Tok::Comma, ",")?;
                let (pos, rank) = self.named_int("rank")?;
                if rank < 1 {
                    return Err(ParseError::Semantic {
                        pos,
                        message: "rank must be at least 1".to_string(),
                    });
                }
                VarietyExpr::ProjBundle {
                    base: Box::new(base),
                    rank,
                }
            }
            "blowup" => {
                let ambient = self.expr()?;
                self.expect(Tok::Comma, ",")?;
                let center = self.expr()?;
                self.expect(Tok::Comma, ",")?;
                let (pos, codim) = self.named_int("codim")?;
                if codim < 2 {
                    return Err(ParseError::Semantic {
                        pos,
                        message: format!("codim must be at least 2, got {codim}"),
                    });
                }
                VarietyExpr::BlowUp {
                    ambient: Box::new(ambient),
                    center: Box::new(center),
                    codim,
                }
            }
            _ => unreachable!("checked against EXPR_START"),
        };
        self.expect(Tok::RParen, ")")?;
        Ok(e)
    }
}

pub fn parse(text: &str) -> Result<VarietyExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if p.peek().1 != Tok::End {
        return Err(p.syntax(&["end of input"]));
    }
    Ok(e)
}

impl FromStr for VarietyExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Evaluation failure, carrying the subexpression where it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub expr: String,
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "in {}: {}", self.expr, self.message)
    }
}

impl std::error::Error for EvalError {}

impl VarietyExpr {
    fn fail(&self, message: impl Into<String>) -> EvalError {
        EvalError {
            expr: self.to_string(),
            message: message.into(),
        }
    }

    /// Dimension of the variety, checking every blow-up center bottom-up.
    pub fn dim(&self) -> Result<usize, EvalError> {
        let d = match self {
            VarietyExpr::Point => 0,
            VarietyExpr::Projective(n) => *n as usize,
            VarietyExpr::Curve(_) => 1,
            VarietyExpr::Product(a, b) => a.dim()? + b.dim()?,
            VarietyExpr::ProjBundle { base, rank } => base.dim()? + *rank as usize - 1,
            VarietyExpr::BlowUp {
                ambient,
                center,
                codim,
            } => {
                let (dx, dz) = (ambient.dim()?, center.dim()?);
                if dz + *codim as usize != dx {
                    return Err(self.fail(format!(
                        "center of dimension {dz} cannot have codimension {codim} in a variety of dimension {dx}"
                    )));
                }
                dx
            }
        };
        if d > MAX_EVAL_DIM {
            return Err(self.fail(format!(
                "dimension {d} exceeds the evaluator limit {MAX_EVAL_DIM}"
            )));
        }
        Ok(d)
    }

    /// Depth of the expression tree; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            VarietyExpr::Point | VarietyExpr::Projective(_) | VarietyExpr::Curve(_) => 1,
            VarietyExpr::Product(a, b) => 1 + a.depth().max(b.depth()),
            VarietyExpr::ProjBundle { base, .. } => 1 + base.depth(),
            VarietyExpr::BlowUp {
                ambient, center, ..
            } => 1 + ambient.depth().max(center.depth()),
        }
    }
}

/// Bottom-up evaluation to a Hodge grid tagged with `char`.
pub fn eval(e: &VarietyExpr, char: Characteristic) -> Result<HodgeGrid, EvalError> {
    e.dim()?;
    eval_checked(e).map(|g| g.with_characteristic(char))
}

fn eval_checked(e: &VarietyExpr) -> Result<HodgeGrid, EvalError> {
    let lift = |r: crate::Result<HodgeGrid>| r.map_err(|err| e.fail(err.to_string()));
    match e {
        VarietyExpr::Point => Ok(point()),
        VarietyExpr::Projective(n) => lift(projective_space(*n as usize)),
        VarietyExpr::Curve(g) => Ok(curve(g.clone())),
        VarietyExpr::Product(a, b) => lift(product(&eval_checked(a)?, &eval_checked(b)?)),
        VarietyExpr::ProjBundle { base, rank } => {
            lift(projective_bundle(&eval_checked(base)?, *rank as usize))
        }
        VarietyExpr::BlowUp {
            ambient,
            center,
            codim,
        } => lift(blow_up(
            &eval_checked(ambient)?,
            &eval_checked(center)?,
            *codim as usize,
        )),
    }
}

/// Output layouts for [`print_diamond`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DiamondFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for DiamondFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(DiamondFormat::Text),
            "json" => Ok(DiamondFormat::Json),
            "csv" => Ok(DiamondFormat::Csv),
            other => Err(format!(
                "unknown format {other:?}; expected text, json or csv"
            )),
        }
    }
}

/// Renders a grid without a trailing newline.
///
/// `Text` is the Hodge diamond: line `l` (for `l = 0..=2n`) holds the entries
/// with `p + q = l`, from `h[min(l,n)][l-min(l,n)]` on the left to `p` minimal
/// on the right, centered. `Csv` is the matrix with a header row `p\q,0,..,n`
/// and one row per `p`. `Json` is the grid schema.
pub fn print_diamond(g: &HodgeGrid, format: DiamondFormat) -> String {
    match format {
        DiamondFormat::Json => g.to_json(),
        DiamondFormat::Csv => {
            let n = g.dim();
            let mut lines = vec![std::iter::once("p\\q".to_string())
                .chain((0..=n).map(|q| q.to_string()))
                .collect::<Vec<_>>()
                .join(",")];
            for (p, row) in g.rows().iter().enumerate() {
                lines.push(
                    std::iter::once(p.to_string())
                        .chain(row.iter().map(ToString::to_string))
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            lines.join("\n")
        }
        DiamondFormat::Text => {
            let n = g.dim() as i64;
            let width = g
                .rows()
                .iter()
                .flatten()
                .map(|v| v.to_string().len())
                .max()
                .unwrap_or(1);
            (0..=2 * n)
                .map(|l| {
                    let hi = l.min(n);
                    let lo = (l - n).max(0);
                    let cells: Vec<String> = (lo..=hi)
                        .rev()
                        .map(|p| format!("{:>width$}", g.get(p, l - p).to_string()))
                        .collect();
                    let indent = (n + 1 - cells.len() as i64) as usize * width;
                    format!("{}{}", " ".repeat(indent), cells.join(&" ".repeat(width)))
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}
