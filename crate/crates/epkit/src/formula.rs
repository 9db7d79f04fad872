//! Boolean formulas over variables `x1..xn`: parsing, evaluation, input
//! negation, and brute-force truth tables.
//!
//! Grammar (whitespace insignificant, precedence `¬ > ∧ > ∨`):
//!
//! ```text
//! expr   := term {("|" | "∨") term}
//! term   := factor {("&" | "∧") factor}
//! factor := ("!" | "¬") factor | "(" expr ")" | var
//! var    := "x" digits          (1-based)
//! ```
//!
//! Variable `xi` is 1-based in the surface syntax and maps to coordinate
//! `i-1` of assignments and negation vectors.

use std::fmt;

use thiserror::Error;

use crate::gf2::GF2Vector;

/// Enumeration guard: operations that walk all `2^n` assignments or negation
/// vectors refuse to run beyond this many variables.
pub const MAX_BRUTE_VARS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} out of range (declared variable count {max})")]
    VariableOutOfRange { index: usize, max: usize },
    #[error("assignment length {got} does not match variable count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{n} variables exceed the enumeration guard of {MAX_BRUTE_VARS}")]
    TooManyVariables { n: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Var(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

/// A boolean formula together with the number of variables it is declared
/// over. The declared count is explicit input rather than inferred from the
/// highest index used: a formula may ignore some of its variables, and
/// equivalence problems require both operands over the same `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Formula {
    var_count: usize,
    root: Expr,
}

impl Formula {
    pub fn parse(text: &str, var_count: usize) -> Result<Self, FormulaError> {
        assert!(var_count >= 1, "variable count must be positive");
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens: &tokens, pos: 0 };
        let root = parser.expr()?;
        if let Some((pos, t)) = parser.peek() {
            return Err(FormulaError::Syntax { pos, msg: format!("unexpected {t}") });
        }
        let formula = Formula { var_count, root };
        if let Some(index) = formula.max_var_index().filter(|&i| i > var_count) {
            return Err(FormulaError::VariableOutOfRange { index, max: var_count });
        }
        Ok(formula)
    }

    pub fn from_expr(root: Expr, var_count: usize) -> Result<Self, FormulaError> {
        let formula = Formula { var_count, root };
        if let Some(index) = formula.max_var_index().filter(|&i| i > var_count) {
            return Err(FormulaError::VariableOutOfRange { index, max: var_count });
        }
        Ok(formula)
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    fn max_var_index(&self) -> Option<usize> {
        fn walk(e: &Expr) -> Option<usize> {
            match e {
                Expr::Var(i) => Some(*i),
                Expr::Not(a) => walk(a),
                Expr::And(a, b) | Expr::Or(a, b) => walk(a).max(walk(b)),
            }
        }
        walk(&self.root)
    }

    pub fn evaluate(&self, assignment: &GF2Vector) -> Result<bool, FormulaError> {
        if assignment.len() != self.var_count {
            return Err(FormulaError::LengthMismatch {
                expected: self.var_count,
                got: assignment.len(),
            });
        }
        fn eval(e: &Expr, a: &GF2Vector) -> bool {
            match e {
                Expr::Var(i) => a.get(i - 1),
                Expr::Not(x) => !eval(x, a),
                Expr::And(x, y) => eval(x, a) && eval(y, a),
                Expr::Or(x, y) => eval(x, a) || eval(y, a),
            }
        }
        Ok(eval(&self.root, assignment))
    }

    /// Syntactic input negation: replaces `xi` by `¬xi` wherever bit `i-1` of
    /// `v` is set. The result computes `u ↦ self(v ⊕ u)`.
    pub fn apply_negation_vector(&self, v: &GF2Vector) -> Result<Formula, FormulaError> {
        if v.len() != self.var_count {
            return Err(FormulaError::LengthMismatch { expected: self.var_count, got: v.len() });
        }
        fn rewrite(e: &Expr, v: &GF2Vector) -> Expr {
            match e {
                Expr::Var(i) => {
                    if v.get(i - 1) {
                        Expr::Not(Box::new(Expr::Var(*i)))
                    } else {
                        Expr::Var(*i)
                    }
                }
                Expr::Not(x) => Expr::Not(Box::new(rewrite(x, v))),
                Expr::And(x, y) => Expr::And(Box::new(rewrite(x, v)), Box::new(rewrite(y, v))),
                Expr::Or(x, y) => Expr::Or(Box::new(rewrite(x, v)), Box::new(rewrite(y, v))),
            }
        }
        Ok(Formula { var_count: self.var_count, root: rewrite(&self.root, v) })
    }

    /// Full truth table; entry `u` (read as an n-bit number, bit 0 = `x1`) is
    /// the formula's value on that assignment.
    pub fn truth_table(&self) -> Result<TruthTable, FormulaError> {
        if self.var_count > MAX_BRUTE_VARS {
            return Err(FormulaError::TooManyVariables { n: self.var_count });
        }
        fn words(e: &Expr, n: usize) -> Vec<u64> {
            match e {
                Expr::Var(i) => TruthTable::var_words(i - 1, n),
                Expr::Not(x) => {
                    let mut w = words(x, n);
                    for limb in &mut w {
                        *limb = !*limb;
                    }
                    w
                }
                Expr::And(x, y) => {
                    let mut w = words(x, n);
                    for (a, b) in w.iter_mut().zip(words(y, n)) {
                        *a &= b;
                    }
                    w
                }
                Expr::Or(x, y) => {
                    let mut w = words(x, n);
                    for (a, b) in w.iter_mut().zip(words(y, n)) {
                        *a |= b;
                    }
                    w
                }
            }
        }
        Ok(TruthTable::from_words(self.var_count, words(&self.root, self.var_count)))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                Expr::Var(i) => write!(f, "x{i}"),
                Expr::Not(x) => {
                    write!(f, "!")?;
                    match **x {
                        Expr::Var(_) | Expr::Not(_) => go(x, f),
                        _ => {
                            write!(f, "(")?;
                            go(x, f)?;
                            write!(f, ")")
                        }
                    }
                }
                Expr::And(x, y) => {
                    for (i, side) in [x, y].iter().enumerate() {
                        if i > 0 {
                            write!(f, " & ")?;
                        }
                        match ***side {
                            Expr::Or(_, _) => {
                                write!(f, "(")?;
                                go(side, f)?;
                                write!(f, ")")?;
                            }
                            _ => go(side, f)?,
                        }
                    }
                    Ok(())
                }
                Expr::Or(x, y) => {
                    go(x, f)?;
                    write!(f, " | ")?;
                    go(y, f)
                }
            }
        }
        go(&self.root, f)
    }
}

/// The values of a boolean function on all `2^n` assignments, packed into
/// 64-bit words. Index `u` reads assignment bits as `bit 0 = x1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    fn from_words(n: usize, mut words: Vec<u64>) -> Self {
        let entries = 1usize << n;
        if entries < 64 {
            words[0] &= (1u64 << entries) - 1;
        }
        TruthTable { n, words }
    }

    /// Word pattern for the projection onto input bit `bit` (0-based).
    fn var_words(bit: usize, n: usize) -> Vec<u64> {
        let word_count = (1usize << n).div_ceil(64);
        if bit < 6 {
            // Within a word the pattern is periodic: 0b10 for x1, 0b1100 for x2, ...
            let mut pattern = 0u64;
            for u in 0..64u64 {
                if (u >> bit) & 1 == 1 {
                    pattern |= 1 << u;
                }
            }
            vec![pattern; word_count]
        } else {
            (0..word_count)
                .map(|w| if (w >> (bit - 6)) & 1 == 1 { u64::MAX } else { 0 })
                .collect()
        }
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, u: usize) -> bool {
        debug_assert!(u < self.len());
        (self.words[u / 64] >> (u % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Var(usize),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Var(i) => write!(f, "variable x{i}"),
            Token::Not => write!(f, "'!'"),
            Token::And => write!(f, "'&'"),
            Token::Or => write!(f, "'|'"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormulaError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '!' | '¬' => {
                out.push((pos, Token::Not));
                i += 1;
            }
            '&' | '∧' => {
                out.push((pos, Token::And));
                i += 1;
            }
            '|' | '∨' => {
                out.push((pos, Token::Or));
                i += 1;
            }
            '(' => {
                out.push((pos, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Token::RParen));
                i += 1;
            }
            'x' | 'X' => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].1.is_ascii_digit() {
                    end += 1;
                }
                if end == start {
                    return Err(FormulaError::Syntax {
                        pos,
                        msg: "expected digits after 'x'".to_string(),
                    });
                }
                let digits: String = chars[start..end].iter().map(|(_, c)| c).collect();
                let index: usize = digits.parse().map_err(|_| FormulaError::Syntax {
                    pos,
                    msg: format!("variable index {digits} too large"),
                })?;
                if index == 0 {
                    return Err(FormulaError::VariableOutOfRange { index: 0, max: 0 });
                }
                out.push((pos, Token::Var(index)));
                i = end;
            }
            other => {
                return Err(FormulaError::Syntax { pos, msg: format!("unexpected character {other:?}") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(usize, &'a Token)> {
        self.tokens.get(self.pos).map(|(p, t)| (*p, t))
    }

    fn bump(&mut self) -> Option<(usize, &'a Token)> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, FormulaError> {
        let mut lhs = self.term()?;
        while matches!(self.peek(), Some((_, Token::Or))) {
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, FormulaError> {
        let mut lhs = self.factor()?;
        while matches!(self.peek(), Some((_, Token::And))) {
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, FormulaError> {
        match self.bump() {
            Some((_, Token::Not)) => Ok(Expr::Not(Box::new(self.factor()?))),
            Some((pos, Token::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Token::RParen)) => Ok(inner),
                    _ => Err(FormulaError::Syntax { pos, msg: "unbalanced parenthesis".to_string() }),
                }
            }
            Some((_, Token::Var(i))) => Ok(Expr::Var(*i)),
            Some((pos, t)) => Err(FormulaError::Syntax { pos, msg: format!("unexpected {t}") }),
            None => Err(FormulaError::Syntax {
                pos: self.tokens.last().map(|(p, _)| *p + 1).unwrap_or(0),
                msg: "unexpected end of input".to_string(),
            }),
        }
    }
}
