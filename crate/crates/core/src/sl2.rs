//! SL2(Z) calculus for integral-affine singularities.
//!
//! Matrices act on row vectors from the right.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Mul, Neg};

use num_integer::Integer;
use serde_json::{json, Value};

use crate::diagrams::{Family, ShapeLabel};
use crate::error::{Error, Result};

/// [[a, b], [c, d]] with ad - bc = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SL2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub const ID: SL2 = SL2 { a: 1, b: 0, c: 0, d: 1 };
pub const L: SL2 = SL2 { a: 1, b: 1, c: 0, d: 1 };
pub const R: SL2 = SL2 { a: 1, b: 0, c: 1, d: 1 };
pub const M_II: SL2 = SL2 { a: 1, b: 1, c: -1, d: 0 };
pub const M_III: SL2 = SL2 { a: 0, b: 1, c: -1, d: 0 };
pub const M_IV: SL2 = SL2 { a: 0, b: 1, c: -1, d: -1 };

impl SL2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Parse(format!("determinant of [[{a},{b}],[{c},{d}]] is not 1")));
        }
        Ok(SL2 { a, b, c, d })
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> SL2 {
        SL2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, n: i64) -> SL2 {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.abs()).fold(ID, |acc, _| acc * base)
    }

    /// Row vector times matrix.
    pub fn act(&self, v: (i64, i64)) -> (i64, i64) {
        (v.0 * self.a + v.1 * self.c, v.0 * self.b + v.1 * self.d)
    }

    pub fn conj(&self, g: &SL2) -> SL2 {
        *g * *self * g.inverse()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let nums: Vec<i64> = s
            .split(|c: char| !(c.is_ascii_digit() || c == '-'))
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad matrix {s}"))))
            .collect::<Result<_>>()?;
        match nums.as_slice() {
            &[a, b, c, d] => SL2::new(a, b, c, d),
            _ => Err(Error::Parse(format!("bad matrix {s}"))),
        }
    }
}

impl Mul for SL2 {
    type Output = SL2;
    fn mul(self, o: SL2) -> SL2 {
        SL2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Neg for SL2 {
    type Output = SL2;
    fn neg(self) -> SL2 {
        SL2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for SL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Product of L and R powers given as a letter string, e.g. "LLR".
pub fn word_matrix(w: &str) -> SL2 {
    w.chars().fold(ID, |m, ch| match ch {
        'L' => m * L,
        'R' => m * R,
        _ => m,
    })
}

/// The shear fixing v, conjugate to L: M((p,q)) = [[1+pq, q^2], [-p^2, 1-pq]].
pub fn shear_matrix(v: (i64, i64)) -> Result<SL2> {
    let (p, q) = v;
    if p.gcd(&q) != 1 {
        return Err(Error::NotPrimitive(p, q));
    }
    Ok(SL2 { a: 1 + p * q, b: q * q, c: -p * p, d: 1 - p * q })
}

/// I(n1 v1, ..., nk vk): rays listed counterclockwise with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityData {
    pub rays: Vec<((i64, i64), u32)>,
    pub name: Option<String>,
}

pub const U: (i64, i64) = (1, 0);
pub const V: (i64, i64) = (0, 1);
pub const W: (i64, i64) = (-1, -1);

impl SingularityData {
    pub fn new(rays: Vec<((i64, i64), u32)>) -> Self {
        SingularityData { rays: rays.into_iter().filter(|r| r.1 > 0).collect(), name: None }
    }

    /// I(p), I(p,q), I(p,q,r) on u, v, w = -u-v, and I(p,q,r,s) on u, v, -u, -v.
    pub fn i(ns: &[u32]) -> Self {
        let dirs: &[(i64, i64)] = match ns.len() {
            1 => &[U],
            2 => &[U, V],
            3 => &[U, V, W],
            4 => &[U, V, (-1, 0), (0, -1)],
            _ => panic!("I(...) takes one to four multiplicities"),
        };
        Self::new(dirs.iter().copied().zip(ns.iter().copied()).collect())
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn charge(&self) -> u32 {
        self.rays.iter().map(|r| r.1).sum()
    }

    pub fn monodromy(&self) -> SL2 {
        self.rays.iter().fold(ID, |m, &(v, n)| m * shear_matrix(v).expect("primitive ray").pow(n as i64))
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.rays.iter().map(|((p, q), n)| format!("{n}({p},{q})")).collect();
        format!("I({})", parts.join(","))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rays": self.rays.iter().map(|((p, q), n)| json!({"v": [p, q], "n": n})).collect::<Vec<_>>(),
            "charge": self.charge(),
            "monodromy": self.monodromy().to_string(),
            "class": conjugacy_class(&self.monodromy()),
            "name": self.name,
        })
    }
}

pub fn monodromy(s: &SingularityData) -> SL2 {
    s.monodromy()
}

pub fn charge(s: &SingularityData) -> u32 {
    s.charge()
}

/// Conjugacy class descriptor: "Id", "-Id", "Kodaira:II*", "L^3", "R^2",
/// "-L^2", "word:RRLRL", "-word:RL".
pub fn conjugacy_class(m: &SL2) -> String {
    if *m == ID {
        return "Id".into();
    }
    if *m == -ID {
        return "-Id".into();
    }
    let t = m.trace();
    match t {
        -1..=1 => {
            // elliptic: the sign of c is constant on SL2(R) classes
            let star = m.c > 0;
            let base = match t {
                1 => "II",
                0 => "III",
                _ => "IV",
            };
            format!("Kodaira:{}{}", base, if star { "*" } else { "" })
        }
        2 => parabolic_class(m),
        -2 => format!("-{}", parabolic_class(&-*m)),
        t if t > 2 => format!("word:{}", hyperbolic_word(m)),
        _ => format!("-word:{}", hyperbolic_word(&-*m)),
    }
}

/// Trace 2, not the identity: M = M(v)^n, conjugate to L^n (n > 0) or R^-n.
fn parabolic_class(m: &SL2) -> String {
    let n_abs = m.b.abs().gcd(&m.c.abs());
    let n = if m.b != 0 { m.b.signum() * n_abs } else { -m.c.signum() * n_abs };
    if n > 0 {
        format!("L^{n}")
    } else {
        format!("R^{}", -n)
    }
}

/// Representative matrix for a Kodaira finite-order class.
pub fn kodaira_matrix(name: &str) -> Option<SL2> {
    Some(match name {
        "II" => M_II,
        "II*" => M_II.inverse(),
        "III" => M_III,
        "III*" => M_III.inverse(),
        "IV" => M_IV,
        "IV*" => -M_II,
        _ => return None,
    })
}

struct Quadratic {
    p: i128,
    q: i128,
    d: i128,
    sqrt_floor: i128,
}

impl Quadratic {
    /// floor((p + sqrt d) / q) for non-square d.
    fn floor(&self) -> i128 {
        let num = self.p + self.sqrt_floor;
        if self.q > 0 {
            Integer::div_floor(&num, &self.q)
        } else {
            -Integer::div_floor(&num, &-self.q) - 1
        }
    }
}

fn isqrt(n: i128) -> i128 {
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Positive L/R word of a conjugate of m (trace > 2), minimized over rotations.
///
/// The attracting fixed point of the Moebius action has an eventually
/// periodic continued fraction; an even number of steps conjugates m into a
/// matrix fixing a purely periodic point, which is a power of the period
/// word L^a0 R^a1 L^a2 ...
pub fn hyperbolic_word(m: &SL2) -> String {
    let t = m.trace() as i128;
    assert!(t > 2, "hyperbolic_word needs trace > 2");
    let d = t * t - 4;
    let mut x = Quadratic { p: (m.a - m.d) as i128, q: 2 * m.c as i128, d, sqrt_floor: isqrt(d) };
    let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let (start, end) = loop {
        if let Some(&i) = seen.get(&(x.p, x.q)) {
            break (i, quotients.len());
        }
        seen.insert((x.p, x.q), quotients.len());
        let a = x.floor();
        quotients.push(a);
        let p = a * x.q - x.p;
        let q = (x.d - p * p) / x.q;
        x = Quadratic { p, q, ..x };
    };
    let mut period = end - start;
    let first = if start % 2 == 0 { start } else { start + 1 };
    if period % 2 == 1 {
        period *= 2;
    }
    let quot = |k: usize| quotients[start + (k - start) % (end - start)];
    // even number of factors [[a,1],[1,0]], so g has determinant 1
    let g = quotients[..first].iter().fold(ID, |g, &a| g * SL2 { a: a as i64, b: 1, c: 1, d: 0 });
    let word: String = (first..first + period)
        .map(|k| {
            let letter = if (k - first) % 2 == 0 { 'L' } else { 'R' };
            std::iter::repeat_n(letter, quot(k) as usize).collect::<String>()
        })
        .collect();
    let w = word_matrix(&word);
    let n = g.inverse() * *m * g;
    let mut power = w;
    let mut k = 1;
    while power != n {
        assert!(power.trace() <= n.trace(), "continued fraction reduction failed for {m}");
        power = power * w;
        k += 1;
    }
    min_rotation(&word.repeat(k))
}

/// Lexicographically least rotation with R ordered before L.
pub fn min_rotation(w: &str) -> String {
    let key: Vec<u8> = w.bytes().map(|c| if c == b'R' { 0 } else { 1 }).collect();
    let n = key.len();
    let best =
        (0..n).min_by(|&i, &j| (0..n).map(|k| key[(i + k) % n]).cmp((0..n).map(|k| key[(j + k) % n]))).unwrap_or(0);
    w[best..].to_string() + &w[..best]
}

/// Breadth-first search for g with g m g^-1 = target among words of length
/// at most `max_len` in L, R and their inverses.
pub fn find_conjugator(m: &SL2, target: &SL2, max_len: usize) -> Option<SL2> {
    let gens = [L, R, L.inverse(), R.inverse()];
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((ID, 0));
    seen.insert(ID);
    while let Some((g, len)) = queue.pop_front() {
        if m.conj(&g) == *target {
            return Some(g);
        }
        if len == max_len {
            continue;
        }
        for h in gens {
            let next = g * h;
            if seen.insert(next) {
                queue.push_back((next, len + 1));
            }
        }
    }
    None
}

/// Class descriptor with an explicit conjugator to the class representative
/// when one is found within the word-length bound.
pub fn certified_class(m: &SL2, max_len: usize) -> (String, Option<SL2>) {
    let class = conjugacy_class(m);
    let rep = class_representative(&class);
    let g = rep.and_then(|r| find_conjugator(m, &r, max_len));
    (class, g)
}

/// A matrix in the class named by a descriptor.
pub fn class_representative(class: &str) -> Option<SL2> {
    if let Some(rest) = class.strip_prefix("-") {
        return class_representative(rest).map(|m| -m);
    }
    if class == "Id" {
        return Some(ID);
    }
    if let Some(k) = class.strip_prefix("Kodaira:") {
        return kodaira_matrix(k);
    }
    if let Some(n) = class.strip_prefix("L^") {
        return n.parse().ok().map(|n| L.pow(n));
    }
    if let Some(n) = class.strip_prefix("R^") {
        return n.parse().ok().map(|n| R.pow(n));
    }
    class.strip_prefix("word:").map(word_matrix)
}

/// Divisor rays and singularity of an involution pair, by shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub singularity: SingularityData,
    /// ray vectors with multiplicity 1 (primitive) or 2 (twice primitive)
    pub rays: Vec<((i64, i64), u32)>,
}

impl Profile {
    pub fn to_json(&self) -> Value {
        json!({
            "singularity": self.singularity.describe(),
            "data": self.singularity.to_json(),
            "divisor_rays": self.rays.iter().map(|((p, q), k)| json!({"v": [p, q], "multiplicity": k})).collect::<Vec<_>>(),
        })
    }
}

fn ray(v: (i64, i64)) -> ((i64, i64), u32) {
    let g = v.0.gcd(&v.1);
    (v, if g % 2 == 0 { 2 } else { 1 })
}

pub fn table_profile(shape: &ShapeLabel) -> Result<Profile> {
    use Family::*;
    let n = shape.size as i64;
    let nu = shape.size as u32;
    let unknown = || Error::UnknownShape(shape.to_string());
    let (sing, rays) = match (shape.irrelevant, shape.family) {
        (true, A) if nu == 1 => (SingularityData::i(&[1, 0, 1, 0]), vec![(2, 0), (-2, 0)]),
        (true, DownAMinus) if nu == 1 => (SingularityData::i(&[1, 0, 1, 0]), vec![(1, 0), (-1, 0)]),
        (true, _) => return Err(unknown()),
        (_, A | AMinus) => (SingularityData::i(&[nu + 1]), vec![(2, 0), (-2, -n - 1)]),
        (_, DownA | DownAMinus) => (SingularityData::i(&[nu + 1]), vec![(2, -1), (-2, -n)]),
        (_, UpAMinus) if nu == 2 => (SingularityData::i(&[1, 1, 1, 1]), vec![(-1, 1), (1, -1)]),
        (_, UpA | UpAMinus) if nu >= 3 => (SingularityData::i(&[nu - 1, 1, 1, 1]), vec![(1, 1), (-2, n - 3)]),
        (_, UpAPrime) if nu % 2 == 1 => {
            let k = nu.div_ceil(2);
            (SingularityData::i(&[k, 1, k, 1]), vec![(0, 1), (0, -1)])
        }
        (_, D) if nu >= 4 => (SingularityData::i(&[nu - 2, 1, 2, 1]), vec![(2, 0), (-2, 0)]),
        (_, DMinus) if nu >= 4 => (SingularityData::i(&[nu - 2, 1, 2, 1]), vec![(2, 0), (-1, 1)]),
        (_, DPrime) if nu.is_multiple_of(2) => (SingularityData::i(&[nu - 2, 1, 3, 1]), vec![(2, 0), (-1, 0)]),
        (_, EMinus) if nu == 6 => (SingularityData::i(&[3, 1, 3, 1]), vec![(0, 1), (0, -1)]),
        (_, E) if nu == 7 => (SingularityData::i(&[4, 1, 3, 1]), vec![(2, 0), (-1, 0)]),
        (_, EMinus) if nu == 8 => (SingularityData::i(&[5, 1, 3, 1]), vec![(1, 0), (-1, 0)]),
        _ => return Err(unknown()),
    };
    Ok(Profile { singularity: sing.named(&shape.to_string()), rays: rays.into_iter().map(ray).collect() })
}

/// One row of the table of named singularities, instantiated at parameter n.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub definition: String,
    pub name: String,
    pub data: SingularityData,
    pub charge: u32,
    pub monodromy: SL2,
    pub trace: i64,
}

/// Rows of the singularity table at parameter n (n >= 3).
pub fn table_rows(n: u32) -> Vec<TableRow> {
    let ni = n as i64;
    let row = |def: String, name: String, data: SingularityData, charge: u32, mono: SL2, trace: i64| TableRow {
        definition: def,
        name,
        data,
        charge,
        monodromy: mono,
        trace,
    };
    let mut rows = vec![
        row(format!("I({})", n + 1), format!("A{n}"), SingularityData::i(&[n + 1]), n + 1, L.pow(ni + 1), 2),
        row("I(1,1)".into(), "II".into(), SingularityData::i(&[1, 1]), 2, M_II, 1),
        row("I(1,1,1)".into(), "III".into(), SingularityData::i(&[1, 1, 1]), 3, M_III, 0),
        row("I(2,1,1)".into(), "IV".into(), SingularityData::i(&[2, 1, 1]), 4, M_IV, -1),
        row("I(2,3,3)".into(), "E6".into(), SingularityData::i(&[2, 3, 3]), 8, -M_II, -1),
        row("I(2,3,4)".into(), "E7".into(), SingularityData::i(&[2, 3, 4]), 9, M_III.inverse(), 0),
        row("I(2,3,5)".into(), "E8".into(), SingularityData::i(&[2, 3, 5]), 10, M_II.inverse(), 1),
        row("I(u,u+2v)".into(), "D0".into(), SingularityData::new(vec![(U, 1), ((1, 2), 1)]), 2, -R.pow(4), -2),
        row(
            format!("I(n+1,1) n={n}"),
            format!("^A{n}"),
            SingularityData::i(&[n + 1, 1]),
            n + 2,
            -(L.pow(ni - 3) * R),
            1 - ni,
        ),
        row(
            format!("I(n,n,2) n={n}"),
            format!("^A{}'", 2 * n - 1),
            SingularityData::i(&[n, n, 2]),
            2 * n + 2,
            L.pow(ni - 4) * R * L.pow(ni - 4) * R,
            (ni - 2) * (ni - 2) - 2,
        ),
    ];
    if n >= 2 {
        rows.push(row(
            format!("I(2,2,n-2) n={n}"),
            format!("D{n}"),
            SingularityData::i(&[2, 2, n - 2]),
            n + 2,
            -L.pow(ni - 4),
            -2,
        ));
    }
    if n >= 3 {
        rows.push(row(
            format!("I(2,3,n-3) n={n}"),
            format!("E{n}"),
            SingularityData::i(&[2, 3, n - 3]),
            n + 2,
            L.pow(ni - 9) * R,
            ni - 7,
        ));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_of_basis_vectors() {
        assert_eq!(shear_matrix((0, 1)).unwrap(), L);
        assert_eq!(shear_matrix((1, 0)).unwrap().act((1, 0)), (1, 0));
        assert_eq!(shear_matrix((1, 0)).unwrap() * shear_matrix((0, 1)).unwrap(), M_II);
        assert!(shear_matrix((2, 4)).is_err());
    }

    #[test]
    fn parabolic_classes() {
        assert_eq!(conjugacy_class(&L.pow(3)), "L^3");
        assert_eq!(conjugacy_class(&(R.inverse() * L.pow(3) * R)), "L^3");
        assert_eq!(conjugacy_class(&R.pow(2)), "R^2");
        assert_eq!(conjugacy_class(&L.pow(-2)), "R^2");
    }

    #[test]
    fn rotation_invariance_of_words() {
        assert_eq!(conjugacy_class(&(R * L)), conjugacy_class(&(L * R)));
        assert_eq!(conjugacy_class(&(R * R * L * R * L)), "word:RRLRL");
    }

    #[test]
    fn kodaira_names() {
        assert_eq!(conjugacy_class(&M_II), "Kodaira:II");
        assert_eq!(conjugacy_class(&M_II.inverse()), "Kodaira:II*");
        assert_eq!(conjugacy_class(&M_III), "Kodaira:III");
        assert_eq!(conjugacy_class(&-M_II), "Kodaira:IV*");
    }

    #[test]
    fn min_rotation_prefers_r() {
        assert_eq!(min_rotation("LRR"), "RRL");
    }
}
