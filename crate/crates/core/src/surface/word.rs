use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator or its inverse. Generators are numbered `a1, b1, a2, b2, ...`
/// and a letter is `2 * generator + inverse_bit`, which makes the natural
/// integer order `a1 < a1^-1 < b1 < b1^-1 < a2 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u8);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((2 * generator + inverse as usize) as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator();
        let (lower, upper) = if g.is_multiple_of(2) {
            ('a', 'A')
        } else {
            ('b', 'B')
        };
        let c = if self.is_inverse() { upper } else { lower };
        write!(f, "{}{}", c, g / 2 + 1)
    }
}

/// A freely reduced word in the surface group generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// Freely reduces the given letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        GroupWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// Largest generator index used, plus one.
    pub fn generator_span(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.generator() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Product of commutators `[a1, b1] ... [ag, bg]`.
    pub fn surface_relator(genus: usize) -> Self {
        let mut letters = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let a = Letter::new(2 * i, false);
            let b = Letter::new(2 * i + 1, false);
            letters.extend([a, b, a.inverse(), b.inverse()]);
        }
        GroupWord { letters }
    }

    /// Shortlex comparison (length first, then letter order).
    pub fn shortlex_cmp(&self, other: &GroupWord) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses words like `a1 b1 A1 B1`, `a1b1a1^-1b1^-1` or `1` (identity).
    /// Upper-case letters denote inverses.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(GroupWord::identity());
        }
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut letters = Vec::new();
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() || ch == '*' || ch == '.' {
                i += 1;
                continue;
            }
            let (is_b, mut inverse) = match ch {
                'a' => (false, false),
                'b' => (true, false),
                'A' => (false, true),
                'B' => (true, true),
                _ => return Err(Error::InvalidWord(format!("unexpected `{ch}` in `{s}`"))),
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(Error::InvalidWord(format!("missing handle index in `{s}`")));
            }
            let idx: usize = chars[start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::InvalidWord(s.to_string()))?;
            if idx == 0 {
                return Err(Error::InvalidWord(format!(
                    "handle indices start at 1 in `{s}`"
                )));
            }
            if chars[i..].starts_with(&['^', '-', '1']) {
                inverse = !inverse;
                i += 3;
            } else if i < chars.len() && chars[i] == '\'' {
                inverse = !inverse;
                i += 1;
            }
            let generator = 2 * (idx - 1) + is_b as usize;
            letters.push(Letter::new(generator, inverse));
        }
        Ok(GroupWord::from_letters(letters))
    }
}

/// Group presentation `<a1, b1, ..., ag, bg | [a1, b1] ... [ag, bg]>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePresentation {
    pub genus: usize,
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidCoordinates(format!("genus {genus} < 2")));
        }
        Ok(SurfacePresentation { genus })
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn relator(&self) -> GroupWord {
        GroupWord::surface_relator(self.genus)
    }

    pub fn generators(&self) -> Vec<GroupWord> {
        (0..self.generator_count())
            .map(|g| GroupWord::from_letters([Letter::new(g, false)]))
            .collect()
    }
}

/// All freely reduced nonempty words of length at most `radius`, in shortlex order.
pub fn enumerate_words(genus: usize, radius: usize) -> Vec<GroupWord> {
    let alphabet = (4 * genus) as u8;
    let mut out = Vec::new();
    let mut layer: Vec<GroupWord> = vec![GroupWord::identity()];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(layer.len() * (alphabet as usize - 1));
        for w in &layer {
            let last = w.letters.last().copied();
            for l in (0..alphabet).map(Letter) {
                if last == Some(l.inverse()) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(GroupWord { letters });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Depth-first visit of every freely reduced nonempty word of length at most
/// `radius`, carrying a value accumulated letter by letter (typically the
/// matrix of the word). `step(acc, letter)` extends the accumulator on the right.
pub fn visit_words<T: Clone>(
    genus: usize,
    radius: usize,
    root: T,
    step: &impl Fn(&T, Letter) -> T,
    visit: &mut impl FnMut(&[Letter], &T),
) {
    let alphabet = (4 * genus) as u8;
    let mut stack: Vec<Letter> = Vec::with_capacity(radius);
    fn rec<T: Clone>(
        alphabet: u8,
        radius: usize,
        stack: &mut Vec<Letter>,
        acc: &T,
        step: &impl Fn(&T, Letter) -> T,
        visit: &mut impl FnMut(&[Letter], &T),
    ) {
        if stack.len() == radius {
            return;
        }
        let last = stack.last().copied();
        for l in (0..alphabet).map(Letter) {
            if last == Some(l.inverse()) {
                continue;
            }
            let next = step(acc, l);
            stack.push(l);
            visit(stack, &next);
            rec(alphabet, radius, stack, &next, step, visit);
            stack.pop();
        }
    }
    rec(alphabet, radius, &mut stack, &root, step, visit);
}
