//! Group presentations, words, and their evaluation in SL2.
//!
//! Word grammar (whitespace separates terms):
//!
//! ```text
//! word   := term+
//! term   := factor ('^' signed-integer)?
//! factor := generator | generator "'" | '(' word ')' | '1'
//! ```
//!
//! `a'` is the inverse of `a` and `1` is the empty word.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Sl2Matrix;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn pos(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn neg(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub fn inv(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word in the generators. Ordered shortlex: by length, then letter by
/// letter with `a < a' < b < b' < …`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Wraps letters as given; no reduction happens.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    /// Builds a word from signed generator indices: `+1` is the first
    /// generator, `-1` its inverse. Freely reduces.
    pub fn from_signed(indices: &[i32]) -> Self {
        Self(
            indices
                .iter()
                .map(|&i| {
                    assert!(i != 0, "generator indices are 1-based");
                    Letter::new(i.unsigned_abs() as usize - 1, i < 0)
                })
                .collect(),
        )
        .free_reduce()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last().is_some_and(|&last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    /// Freely and cyclically reduced form (first and last letters do not cancel).
    pub fn cyclic_reduce(&self) -> Self {
        let w = self.free_reduce().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo].cancels(w[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Self(w[lo..hi].to_vec())
    }

    /// Rotation moving the letter at `k` to the front.
    pub fn rotate(&self, k: usize) -> Self {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Self(v)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Self(v).free_reduce()
    }

    /// Largest generator index used, plus one.
    pub fn rank_needed(&self) -> usize {
        self.0.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.names.get(l.generator) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "g{}", l.generator + 1)?,
            }
            if l.inverse {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresentationKind {
    Free,
    Surface { genus: usize },
    Explicit,
}

/// Generators with names in declaration order, plus relators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    kind: PresentationKind,
    generators: Vec<String>,
    relators: Vec<Word>,
}

pub fn is_valid_generator_name(name: &str) -> bool {
    let mut bytes = name.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z'))
        && bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
}

fn check_names(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if !is_valid_generator_name(n) {
            return Err(Error::InvalidPresentation(format!(
                "generator name {n:?} does not match [a-z][a-z0-9_]*"
            )));
        }
        if names[..i].contains(n) {
            return Err(Error::InvalidPresentation(format!(
                "duplicate generator name {n:?}"
            )));
        }
    }
    Ok(())
}

fn default_free_names(rank: usize) -> Vec<String> {
    if rank <= 26 {
        (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (1..=rank).map(|i| format!("g{i}")).collect()
    }
}

/// `[a1, b1][a2, b2]…` over generators ordered a1, b1, a2, b2, ….
pub fn surface_relator(genus: usize) -> Word {
    let mut v = Vec::with_capacity(4 * genus);
    for i in 0..genus {
        let (a, b) = (2 * i, 2 * i + 1);
        v.extend([
            Letter::pos(a),
            Letter::pos(b),
            Letter::neg(a),
            Letter::neg(b),
        ]);
    }
    Word(v)
}

impl Presentation {
    /// Free group with generators `a, b, c, …`.
    pub fn free(rank: usize) -> Self {
        Self::free_named(default_free_names(rank)).expect("default names are valid")
    }

    pub fn free_named(names: Vec<String>) -> Result<Self> {
        check_names(&names)?;
        Ok(Self {
            kind: PresentationKind::Free,
            generators: names,
            relators: Vec::new(),
        })
    }

    /// Closed surface group of the given genus on `a1, b1, …, ag, bg`.
    pub fn surface(genus: usize) -> Result<Self> {
        let names = (1..=genus)
            .flat_map(|i| [format!("a{i}"), format!("b{i}")])
            .collect();
        Self::surface_named(genus, names)
    }

    /// Surface group whose generators, in order, play the roles a1, b1, a2, ….
    pub fn surface_named(genus: usize, names: Vec<String>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidPresentation(format!(
                "surface genus must be at least 2, got {genus}"
            )));
        }
        if names.len() != 2 * genus {
            return Err(Error::InvalidPresentation(format!(
                "genus {genus} needs {} generators, got {}",
                2 * genus,
                names.len()
            )));
        }
        check_names(&names)?;
        Ok(Self {
            kind: PresentationKind::Surface { genus },
            generators: names,
            relators: vec![surface_relator(genus)],
        })
    }

    pub fn explicit(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        check_names(&names)?;
        for r in &relators {
            if r.rank_needed() > names.len() {
                return Err(Error::InvalidPresentation(
                    "relator uses an undeclared generator".into(),
                ));
            }
        }
        Ok(Self {
            kind: PresentationKind::Explicit,
            generators: names,
            relators,
        })
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word(text, self)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    pub fn ball(&self, max_len: usize) -> Vec<Word> {
        ball(self, max_len)
    }

    /// Short description such as `free(2)` or `surface(2)`.
    pub fn describe(&self) -> String {
        match self.kind {
            PresentationKind::Free => format!("free({})", self.rank()),
            PresentationKind::Surface { genus } => format!("surface({genus})"),
            PresentationKind::Explicit => format!(
                "explicit({} generators, {} relators)",
                self.rank(),
                self.relators.len()
            ),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}", self.generators.join(", "))?;
        if !self.relators.is_empty() {
            f.write_str(" | ")?;
            for (i, r) in self.relators.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", r.display(&self.generators))?;
            }
        }
        f.write_str(">")
    }
}

// Longest input expansion accepted from `^` exponents.
const MAX_PARSED_LEN: usize = 1 << 20;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    presentation: &'a Presentation,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::SyntaxError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<Vec<Letter>> {
        let mut letters = Vec::new();
        let mut terms = 0;
        self.skip_ws();
        while !matches!(self.peek(), None | Some(b')')) {
            let term = self.term()?;
            if letters.len() + term.len() > MAX_PARSED_LEN {
                return self.err("word too long");
            }
            letters.extend(term);
            terms += 1;
            self.skip_ws();
        }
        if terms == 0 {
            return self.err("expected a term");
        }
        Ok(letters)
    }

    fn term(&mut self) -> Result<Vec<Letter>> {
        let base = self.factor()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        let k: i64 = match text.parse() {
            Ok(k) => k,
            Err(_) => {
                self.pos = start;
                return self.err("expected a signed integer exponent");
            }
        };
        if (base.len() as u128) * (k.unsigned_abs() as u128) > MAX_PARSED_LEN as u128 {
            return self.err("word too long");
        }
        Ok(Word(base).pow(k).0)
    }

    fn factor(&mut self) -> Result<Vec<Letter>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.word()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'1') => {
                self.pos += 1;
                if self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    return self.err("unexpected character after '1'");
                }
                Ok(Vec::new())
            }
            Some(b'a'..=b'z') => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let g = self
                    .presentation
                    .generator_index(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                let inverse = self.peek() == Some(b'\'');
                if inverse {
                    self.pos += 1;
                }
                Ok(vec![Letter::new(g, inverse)])
            }
            Some(_) => self.err("expected a generator, '(' or '1'"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses and freely reduces a word over the presentation's generators.
pub fn parse_word(text: &str, presentation: &Presentation) -> Result<Word> {
    let mut parser = Parser {
        src: text,
        pos: 0,
        presentation,
    };
    let letters = parser.word()?;
    if parser.peek().is_some() {
        return parser.err("unbalanced ')'");
    }
    Ok(Word(letters).free_reduce())
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// Symmetrized relator set: all cyclic rotations of each cyclically reduced
/// relator and of its inverse.
fn symmetrized(relators: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for r in relators {
        let r = r.cyclic_reduce();
        if r.is_empty() {
            continue;
        }
        for base in [r.clone(), r.inverse()] {
            for k in 0..base.len() {
                let rot = base.rotate(k);
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
    }
    out
}

fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Metric small cancellation C'(1/6): every piece is shorter than a sixth of
/// each relator it occurs in. Under it Dehn's algorithm solves the word problem.
pub fn satisfies_small_cancellation(relators: &[Word]) -> bool {
    let sym = symmetrized(relators);
    for (i, r) in sym.iter().enumerate() {
        for (j, s) in sym.iter().enumerate() {
            if i != j && 6 * common_prefix(&r.0, &s.0) >= r.len() {
                return false;
            }
        }
    }
    true
}

/// Dehn's algorithm: repeatedly replace more than half of a relator by the
/// inverse of its complement. The result is empty iff `w` is trivial.
pub fn dehn_reduce(w: &Word, presentation: &Presentation) -> Result<Word> {
    let relators = presentation.relators();
    if presentation.kind() == PresentationKind::Explicit && !satisfies_small_cancellation(relators)
    {
        return Err(Error::NotDehnPresentation);
    }
    let sym = symmetrized(relators);
    let mut cur = w.free_reduce();
    'outer: loop {
        for i in 0..cur.len() {
            for r in &sym {
                let m = common_prefix(&cur.0[i..], &r.0);
                if 2 * m > r.len() {
                    let replacement = Word(r.0[m..].to_vec()).inverse();
                    let mut v = cur.0[..i].to_vec();
                    v.extend_from_slice(&replacement.0);
                    v.extend_from_slice(&cur.0[i + m..]);
                    cur = Word(v).free_reduce();
                    continue 'outer;
                }
            }
        }
        return Ok(cur);
    }
}

/// Product of the assigned matrices in word order; the empty word gives the
/// identity. `assignment[i]` is the image of generator `i`.
pub fn evaluate(w: &Word, assignment: &[Sl2Matrix]) -> Result<Sl2Matrix> {
    let first = assignment
        .first()
        .ok_or_else(|| Error::UnknownGenerator("no generators assigned".into()))?;
    let mut acc = Sl2Matrix::identity(first.context());
    for l in &w.0 {
        let m = assignment
            .get(l.generator)
            .ok_or_else(|| Error::UnknownGenerator(format!("generator #{}", l.generator + 1)))?;
        acc = if l.inverse {
            &acc * &m.inverse()
        } else {
            &acc * m
        };
    }
    Ok(acc)
}

/// All letters in shortlex order: a, a', b, b', ….
pub fn alphabet(rank: usize) -> Vec<Letter> {
    (0..rank)
        .flat_map(|g| [Letter::pos(g), Letter::neg(g)])
        .collect()
}

/// Freely reduced words of each exact length `0..=max_len`, each level in
/// shortlex order. Words are not quotiented by relators.
pub fn ball_levels(rank: usize, max_len: usize) -> Vec<Vec<Word>> {
    let letters = alphabet(rank);
    let mut levels = vec![vec![Word::empty()]];
    for _ in 0..max_len {
        let prev = levels.last().expect("nonempty");
        let mut next = Vec::new();
        for w in prev {
            for &l in &letters {
                if w.0.last().is_some_and(|&last| last.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        levels.push(next);
    }
    levels
}

/// All freely reduced words of length at most `max_len`, in shortlex order.
pub fn ball(presentation: &Presentation, max_len: usize) -> Vec<Word> {
    ball_levels(presentation.rank(), max_len)
        .into_iter()
        .flatten()
        .collect()
}

/// `|ball(free(rank), max_len)|` in closed form.
pub fn ball_size(rank: usize, max_len: usize) -> u128 {
    if rank == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut level: u128 = 2 * rank as u128;
    for _ in 0..max_len {
        total = total.saturating_add(level);
        level = level.saturating_mul(2 * rank as u128 - 1);
    }
    total
}
