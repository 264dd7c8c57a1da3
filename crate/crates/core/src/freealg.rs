//! Free-algebra layer: weighted generators, words, monomial orders and
//! noncommutative polynomials over exact rationals.
//!
//! Everything downstream (reduction systems, coproducts, linear solves)
//! manipulates these values; all coefficients are `BigRational`, never floats.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient. `num_rational` keeps values reduced with a
/// positive denominator, which is exactly the invariant we need.
pub type Scalar = num_rational::BigRational;

pub fn s_int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn s_ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a scalar as `p` or `p/q`.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p` or `p/q` (optional leading sign on `p`).
pub fn parse_scalar(text: &str) -> Result<Scalar, FreeAlgError> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| FreeAlgError::Parse(text.to_string(), "bad rational".into()))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| FreeAlgError::Parse(text.to_string(), "bad rational".into()))?;
    if d.is_zero() {
        return Err(FreeAlgError::ZeroDenominator);
    }
    Ok(Scalar::new(n, d))
}

#[derive(Debug, Error)]
pub enum FreeAlgError {
    #[error("no leading word: zero polynomial")]
    ZeroPolynomial,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("parse error in `{0}`: {1}")]
    Parse(String, String),
    #[error("generator `{0}` must have weight >= 1")]
    BadWeight(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}

/// Index of a generator in the declared total order.
pub type GenId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    pub name: String,
    pub weight: u64,
}

/// Totally ordered, weighted generator list. Ids are 0..n-1 in order.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    by_name: HashMap<String, GenId>,
}

impl PartialEq for GeneratorSet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}
impl Eq for GeneratorSet {}

impl GeneratorSet {
    pub fn new<I, S>(named: I) -> Result<Self, FreeAlgError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut gens = Vec::new();
        let mut by_name = HashMap::new();
        for (name, weight) in named {
            let name = name.into();
            if weight == 0 {
                return Err(FreeAlgError::BadWeight(name));
            }
            let id = gens.len();
            if by_name.insert(name.clone(), id).is_some() {
                return Err(FreeAlgError::DuplicateName(name));
            }
            gens.push(Generator { id, name, weight });
        }
        Ok(GeneratorSet { gens, by_name })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn get(&self, id: GenId) -> &Generator {
        &self.gens[id]
    }

    pub fn weight(&self, id: GenId) -> u64 {
        self.gens[id].weight
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id].name
    }

    pub fn id_of(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    /// Builds a word, computing its weight from the letter weights.
    pub fn word(&self, letters: Vec<GenId>) -> Word {
        let weight = letters.iter().map(|&l| self.weight(l)).sum();
        Word { weight, letters }
    }

    pub fn letter(&self, id: GenId) -> Word {
        self.word(vec![id])
    }
}

/// A word in the free monoid on the generators. The cached weight is the sum
/// of the letter weights, so the derived `Ord` (weight, then letter sequence)
/// is exactly the weighted lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    weight: u64,
    letters: Vec<GenId>,
}

impl Word {
    pub fn empty() -> Word {
        Word { weight: 0, letters: Vec::new() }
    }

    pub fn letters(&self) -> &[GenId] {
        &self.letters
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { weight: self.weight + other.weight, letters }
    }

    /// True when the letter ids are nondecreasing (a PBW normal word).
    pub fn is_sorted(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] <= p[1])
    }

    /// Leftmost position `p` with `letters[p] > letters[p+1]`, if any.
    pub fn leftmost_descent(&self) -> Option<usize> {
        self.letters.windows(2).position(|p| p[0] > p[1])
    }

    pub fn rightmost_descent(&self) -> Option<usize> {
        (0..self.letters.len().saturating_sub(1)).rev().find(|&p| self.letters[p] > self.letters[p + 1])
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        self.letters
            .iter()
            .map(|&l| gens.name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Pure lexicographic order: a prefix is smaller, otherwise the first
/// differing letter decides.
pub fn lex_compare(u: &Word, v: &Word) -> Ordering {
    u.letters.cmp(&v.letters)
}

/// Weighted lexicographic order: total weight first, lex as tiebreak.
pub fn wlex_compare(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

/// Noncommutative polynomial: a finite map word -> nonzero scalar.
/// Term iteration is in increasing wlex order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn one() -> NcPoly {
        NcPoly::from_term(Word::empty(), s_int(1))
    }

    pub fn scalar(c: Scalar) -> NcPoly {
        NcPoly::from_term(Word::empty(), c)
    }

    pub fn from_word(w: Word) -> NcPoly {
        NcPoly::from_term(w, s_int(1))
    }

    pub fn from_term(w: Word, c: Scalar) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Counit against the convention that all generators are augmented to 0:
    /// the coefficient of the empty word.
    pub fn eps(&self) -> Scalar {
        self.coeff(&Word::empty())
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn remove_term(&mut self, w: &Word) -> Option<Scalar> {
        self.terms.remove(w)
    }

    pub fn add_scaled(&mut self, other: &NcPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, k) in other.terms() {
            self.add_term(w.clone(), k.clone() * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        let mut p = NcPoly::zero();
        p.add_scaled(self, c);
        p
    }

    /// The wlex-maximal word with nonzero coefficient.
    pub fn leading_word(&self) -> Result<&Word, FreeAlgError> {
        self.terms
            .keys()
            .next_back()
            .ok_or(FreeAlgError::ZeroPolynomial)
    }

    pub fn max_weight(&self) -> u64 {
        self.terms.keys().next_back().map_or(0, |w| w.weight())
    }

    /// Free-algebra product: bilinear extension of word concatenation.
    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut p = NcPoly::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                p.add_term(u.concat(v), a.clone() * b);
            }
        }
        p
    }

    pub fn commutator(&self, other: &NcPoly) -> NcPoly {
        &self.mul(other) - &other.mul(self)
    }

    /// Algebra-map substitution: each letter is replaced by its image and the
    /// images are multiplied in word order.
    pub fn substitute_hom(&self, images: &[NcPoly]) -> NcPoly {
        self.substitute_impl(images, false)
    }

    /// Anti-homomorphism substitution (images multiplied in reversed order),
    /// as needed for antipodes.
    pub fn substitute_antihom(&self, images: &[NcPoly]) -> NcPoly {
        self.substitute_impl(images, true)
    }

    fn substitute_impl(&self, images: &[NcPoly], reverse: bool) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in self.terms() {
            let mut prod = NcPoly::one();
            let letters: Vec<GenId> = if reverse {
                w.letters().iter().rev().copied().collect()
            } else {
                w.letters().to_vec()
            };
            for l in letters {
                prod = prod.mul(&images[l]);
            }
            out.add_scaled(&prod, c);
        }
        out
    }

    /// Renders the polynomial in the term-literal syntax, leading word first.
    pub fn display(&self, gens: &GeneratorSet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = !abs.is_one() || w.is_empty();
            if show_coeff {
                out.push_str(&format_scalar(&abs));
                if !w.is_empty() {
                    out.push(' ');
                }
            }
            if !w.is_empty() {
                out.push_str(&w.display(gens));
            }
        }
        out
    }

    /// Parses the polynomial literal syntax, e.g. `1/3 * x0 x0 x0 - y1`.
    /// The `*` after a coefficient is optional; names are matched
    /// case-sensitively against the generator set.
    pub fn parse(text: &str, gens: &GeneratorSet) -> Result<NcPoly, FreeAlgError> {
        let tokens = tokenize(text)?;
        let mut poly = NcPoly::zero();
        let mut pos = 0;
        if tokens.is_empty() {
            return Err(FreeAlgError::Parse(text.into(), "empty input".into()));
        }
        let mut first = true;
        while pos < tokens.len() {
            let mut sign = 1i64;
            loop {
                match tokens.get(pos) {
                    Some(Token::Plus) => pos += 1,
                    Some(Token::Minus) => {
                        sign = -sign;
                        pos += 1;
                    }
                    _ => break,
                }
            }
            if pos >= tokens.len() {
                if first {
                    return Err(FreeAlgError::Parse(text.into(), "dangling sign".into()));
                }
                return Err(FreeAlgError::Parse(text.into(), "trailing sign".into()));
            }
            let mut coeff = s_int(sign);
            if let Some(Token::Number(n)) = tokens.get(pos) {
                let mut value = Scalar::from_integer(n.clone());
                pos += 1;
                if let Some(Token::Slash) = tokens.get(pos) {
                    pos += 1;
                    match tokens.get(pos) {
                        Some(Token::Number(d)) if !d.is_zero() => {
                            value = Scalar::new(value.numer().clone(), d.clone());
                            pos += 1;
                        }
                        Some(Token::Number(_)) => return Err(FreeAlgError::ZeroDenominator),
                        _ => {
                            return Err(FreeAlgError::Parse(
                                text.into(),
                                "expected denominator".into(),
                            ))
                        }
                    }
                }
                coeff *= value;
                if let Some(Token::Star) = tokens.get(pos) {
                    pos += 1;
                }
            }
            let mut letters = Vec::new();
            while let Some(Token::Name(name)) = tokens.get(pos) {
                let id = gens
                    .id_of(name)
                    .ok_or_else(|| FreeAlgError::UnknownGenerator(name.clone()))?;
                letters.push(id);
                pos += 1;
            }
            poly.add_term(gens.word(letters), coeff);
            first = false;
            match tokens.get(pos) {
                None | Some(Token::Plus) | Some(Token::Minus) => {}
                Some(t) => {
                    return Err(FreeAlgError::Parse(
                        text.into(),
                        format!("unexpected token {t:?}"),
                    ))
                }
            }
        }
        Ok(poly)
    }

    /// Parses a bare word literal: whitespace-separated generator names,
    /// the empty string meaning the empty word.
    pub fn parse_word(text: &str, gens: &GeneratorSet) -> Result<Word, FreeAlgError> {
        let mut letters = Vec::new();
        for name in text.split_whitespace() {
            let id = gens
                .id_of(name)
                .ok_or_else(|| FreeAlgError::UnknownGenerator(name.to_string()))?;
            letters.push(id);
        }
        Ok(gens.word(letters))
    }
}

impl fmt::Display for NcPoly {
    /// Name-free fallback; prefer [`NcPoly::display`] with the generator set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(w, c)| format!("{} {:?}", format_scalar(c), w.letters()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::ops::Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut p = self.clone();
        p.add_scaled(rhs, &s_int(1));
        p
    }
}

impl std::ops::Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut p = self.clone();
        p.add_scaled(rhs, &s_int(-1));
        p
    }
}

impl std::ops::Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        NcPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&s_int(-1))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Name(String),
    Number(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FreeAlgError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            // accept both the ascii hyphen and the unicode minus sign
            '-' | '\u{2212}' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Number(digits.parse().expect("digits")));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Name(name));
            }
            other => {
                return Err(FreeAlgError::Parse(
                    text.into(),
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(tokens)
}
