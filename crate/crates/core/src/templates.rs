//! Templates: a palette of allowed colors for every element of `[n]`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bigcount::BigCount;
use crate::counting::Coloring;
use crate::error::{Error, Result};
use crate::real::{Real, RealCtx};
use crate::set::IntegerSet;
use crate::triples::{full_interval_triple_count, restricted_triples};

/// Palettes over `[n]` with colors `1..=r`, `r <= 64`; bit `c - 1` marks color `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    n: usize,
    r: u32,
    palettes: Vec<u64>,
}

fn color_mask(r: u32) -> u64 {
    if r == 64 { !0 } else { (1u64 << r) - 1 }
}

impl Template {
    /// Every palette empty.
    pub fn empty(n: usize, r: u32) -> Result<Self> {
        if r > 64 {
            return Err(Error::domain(format!("templates support r <= 64, got {r}")));
        }
        Ok(Template { n, r, palettes: vec![0; n] })
    }

    /// Every palette `[r]`.
    pub fn full(n: usize, r: u32) -> Result<Self> {
        let mut t = Self::empty(n, r)?;
        t.palettes.fill(color_mask(r));
        Ok(t)
    }

    /// Singleton palettes on the colored set, empty elsewhere.
    pub fn from_coloring(coloring: &Coloring, r: u32) -> Result<Self> {
        let mut t = Self::empty(coloring.set().n(), r)?;
        for (x, c) in coloring.assignments() {
            t.set_palette(x, &[c])?;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn set_palette(&mut self, x: usize, colors: &[u32]) -> Result<()> {
        if x == 0 || x > self.n {
            return Err(Error::domain(format!("{x} is outside [1, {}]", self.n)));
        }
        let mut mask = 0;
        for &c in colors {
            if c == 0 || c > self.r {
                return Err(Error::domain(format!("color {c} is outside 1..={}", self.r)));
            }
            mask |= 1 << (c - 1);
        }
        self.palettes[x - 1] = mask;
        Ok(())
    }

    pub fn palette(&self, x: usize) -> Vec<u32> {
        let mask = self.palette_mask(x);
        (1..=self.r).filter(|c| mask >> (c - 1) & 1 == 1).collect()
    }

    pub(crate) fn palette_mask(&self, x: usize) -> u64 {
        self.palettes.get(x.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn palette_size(&self, x: usize) -> usize {
        self.palette_mask(x).count_ones() as usize
    }

    fn same_shape(&self, other: &Template) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::domain(format!(
                "templates differ in shape: (n, r) = ({}, {}) vs ({}, {})",
                self.n, self.r, other.n, other.r
            )));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TemplateWire {
    n: usize,
    r: u32,
    #[serde(default)]
    palettes: BTreeMap<String, Vec<u32>>,
}

impl Serialize for Template {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut palettes: Vec<(usize, Vec<u32>)> = (1..=self.n)
            .map(|x| (x, self.palette(x)))
            .filter(|(_, p)| !p.is_empty())
            .collect();
        palettes.sort();
        // serialize keys in numeric order
        use serde::ser::SerializeMap;
        struct Ordered<'a>(&'a [(usize, Vec<u32>)]);
        impl Serialize for Ordered<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (x, p) in self.0 {
                    m.serialize_entry(&x.to_string(), p)?;
                }
                m.end()
            }
        }
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Template", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("palettes", &Ordered(&palettes))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Template {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = TemplateWire::deserialize(d)?;
        let mut t = Template::empty(wire.n, wire.r).map_err(D::Error::custom)?;
        for (key, colors) in wire.palettes {
            let x: usize = key.parse().map_err(|_| D::Error::custom(format!("bad element key {key:?}")))?;
            t.set_palette(x, &colors).map_err(D::Error::custom)?;
        }
        Ok(t)
    }
}

/// Parses the JSON template literal `{"n": .., "r": .., "palettes": {"x": [colors]}}`.
pub fn parse_template(text: &str) -> Result<Template> {
    serde_json::from_str(text).map_err(|e| Error::Parse { position: e.column(), message: e.to_string() })
}

/// `P1(x) ⊆ P2(x)` for every `x`.
pub fn is_subtemplate(p1: &Template, p2: &Template) -> Result<bool> {
    p1.same_shape(p2)?;
    Ok(p1.palettes.iter().zip(&p2.palettes).all(|(a, b)| a & !b == 0))
}

/// Pairwise-distinct color choices from three palettes, by inclusion–exclusion.
pub fn rainbow_choices(pa: u64, pb: u64, pc: u64) -> u64 {
    let size = |m: u64| m.count_ones() as u64;
    let (a, b, c) = (size(pa), size(pb), size(pc));
    a * b * c + 2 * size(pa & pb & pc) - size(pa & pb) * c - size(pa & pc) * b - size(pb & pc) * a
}

fn rs_over(p: &Template, domain: &IntegerSet) -> BigCount {
    let triples = restricted_triples(domain);
    let total: u128 = triples
        .par_iter()
        .map(|t| rainbow_choices(p.palette_mask(t.a), p.palette_mask(t.b), p.palette_mask(t.c)) as u128)
        .sum();
    BigCount(BigUint::from(total))
}

/// `RS(P)`: rainbow choices summed over the restricted triples of `[n]`.
pub fn rs_count(p: &Template) -> BigCount {
    rs_over(p, &IntegerSet::full(p.n))
}

/// `RS(P)` counting only triples inside `A`.
pub fn rs_count_within(p: &Template, a: &IntegerSet) -> BigCount {
    rs_over(p, &a.with_ambient(p.n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goodness {
    pub good: bool,
    pub nonempty_on_set: bool,
    pub rs: BigCount,
    /// `n^(-1/3) s([n])`.
    pub threshold: Real,
    /// `threshold - RS(P)`.
    pub slack: Real,
}

/// Nonempty palettes on `A` and `RS(P) <= n^(-1/3) s([n])`, the latter
/// decided exactly as `RS^3 n <= s([n])^3`.
pub fn is_good(p: &Template, a: &IntegerSet) -> Result<Goodness> {
    if a.n() != p.n {
        return Err(Error::domain(format!("set lives in [{}], template in [{}]", a.n(), p.n)));
    }
    let nonempty = a.iter().all(|x| p.palette_mask(x) != 0);
    let rs = rs_count(p);
    let s = BigUint::from(full_interval_triple_count(p.n as u64));
    let small_rs = p.n > 0 && &rs.0 * &rs.0 * &rs.0 * BigUint::from(p.n) <= &s * &s * &s;
    let mut ctx = RealCtx::new();
    let threshold = if p.n == 0 {
        ctx.int(0)
    } else {
        let nf = ctx.int(p.n as u64);
        let cube_root = ctx.cbrt(&nf);
        let sf = ctx.big(&s);
        ctx.div(&sf, &cube_root)
    };
    let rsf = ctx.big(&rs.0);
    let slack = ctx.sub(&threshold, &rsf);
    Ok(Goodness {
        good: nonempty && small_rs,
        nonempty_on_set: nonempty,
        rs,
        threshold: ctx.to_real(&threshold),
        slack: ctx.to_real(&slack),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteProfile {
    /// `|P(x)| = 1`.
    pub x1: usize,
    /// `|P(x)| = 2`.
    pub x2: usize,
    /// `|P(x)| >= 3`.
    pub x3: usize,
    pub empty: usize,
}

pub fn palette_profile(p: &Template, domain: &IntegerSet) -> PaletteProfile {
    let mut prof = PaletteProfile { x1: 0, x2: 0, x3: 0, empty: 0 };
    for x in domain.iter() {
        match p.palette_size(x) {
            0 => prof.empty += 1,
            1 => prof.x1 += 1,
            2 => prof.x2 += 1,
            _ => prof.x3 += 1,
        }
    }
    prof
}

/// `|Y_{i,j}|`: elements of `domain` whose palette is exactly `{i, j}`, `i < j`.
pub fn pair_palette_counts(p: &Template, domain: &IntegerSet) -> BTreeMap<(u32, u32), usize> {
    let mut out = BTreeMap::new();
    for x in domain.iter() {
        if let [i, j] = p.palette(x)[..] {
            *out.entry((i, j)).or_default() += 1;
        }
    }
    out
}

/// Pairs `{i, j}` held by at least `(1 - 2 delta) n` elements of `domain`.
pub fn dominant_pair_palettes(p: &Template, domain: &IntegerSet, delta: &crate::ratio::Ratio) -> Vec<(u32, u32)> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let n = BigRational::from_integer(BigInt::from(p.n));
    let two = BigRational::from_integer(BigInt::from(2));
    let need = (BigRational::from_integer(BigInt::from(1)) - two * &delta.0) * n;
    pair_palette_counts(p, domain)
        .into_iter()
        .filter(|&(_, c)| BigRational::from_integer(BigInt::from(c)) >= need)
        .map(|(k, _)| k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_naive;
    use crate::ratio::Ratio;
    use proptest::prelude::*;

    fn brute_choices(pa: u64, pb: u64, pc: u64, r: u32) -> u64 {
        let mut count = 0;
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let inside = pa >> a & 1 == 1 && pb >> b & 1 == 1 && pc >> c & 1 == 1;
                    if inside && a != b && b != c && a != c {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn inclusion_exclusion_exhaustive_r3() {
        for pa in 0..8 {
            for pb in 0..8 {
                for pc in 0..8 {
                    assert_eq!(rainbow_choices(pa, pb, pc), brute_choices(pa, pb, pc, 3));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn inclusion_exclusion_sampled_r5(pa in 0u64..32, pb in 0u64..32, pc in 0u64..32) {
            prop_assert_eq!(rainbow_choices(pa, pb, pc), brute_choices(pa, pb, pc, 5));
        }

        #[test]
        fn rs_is_monotone(seed in proptest::collection::vec((0u64..16, 0u64..16), 9)) {
            let mut small = Template::empty(9, 4).unwrap();
            let mut big = Template::empty(9, 4).unwrap();
            for (i, (a, b)) in seed.iter().enumerate() {
                small.palettes[i] = a & b;
                big.palettes[i] = *a;
            }
            prop_assert!(is_subtemplate(&small, &big).unwrap());
            prop_assert!(rs_count(&small) <= rs_count(&big));
        }
    }

    #[test]
    fn rs_examples() {
        assert_eq!(rs_count(&Template::full(6, 3).unwrap()), BigCount::from(36));
        let mut mono = Template::empty(6, 3).unwrap();
        for x in 1..=6 {
            mono.set_palette(x, &[1]).unwrap();
        }
        assert_eq!(rs_count(&mono), BigCount::zero());
        let mut forced = Template::empty(3, 3).unwrap();
        for x in 1..=3 {
            forced.set_palette(x, &[x as u32]).unwrap();
        }
        assert_eq!(rs_count(&forced), BigCount::one());
    }

    #[test]
    fn subtemplate_examples() {
        let a = IntegerSet::i2(6).unwrap();
        let f = Coloring::new(a.clone(), vec![1, 2, 1, 3], 3).unwrap();
        let pf = Template::from_coloring(&f, 3).unwrap();
        let full = Template::full(6, 3).unwrap();
        assert!(is_subtemplate(&pf, &full).unwrap());
        assert!(is_subtemplate(&pf, &pf).unwrap());
        let mut p1 = Template::empty(6, 3).unwrap();
        p1.set_palette(3, &[2]).unwrap();
        let mut p2 = Template::empty(6, 3).unwrap();
        p2.set_palette(3, &[1, 3]).unwrap();
        assert!(!is_subtemplate(&p1, &p2).unwrap());
        assert!(is_subtemplate(&p1, &Template::full(6, 4).unwrap()).is_err());
    }

    #[test]
    fn goodness_examples() {
        let a = IntegerSet::i2(6).unwrap();
        let f = Coloring::new(a.clone(), vec![1, 1, 1, 1], 3).unwrap();
        let g = is_good(&Template::from_coloring(&f, 3).unwrap(), &a).unwrap();
        assert!(g.good && g.rs.is_zero());

        let full6 = IntegerSet::full(6);
        let g = is_good(&Template::full(6, 3).unwrap(), &full6).unwrap();
        assert!(!g.good && g.nonempty_on_set);
        assert!((g.threshold.to_f64() - 6.0 / 6f64.cbrt()).abs() < 1e-12);
        assert!((g.slack.to_f64() - (6.0 / 6f64.cbrt() - 36.0)).abs() < 1e-12);

        let mut holey = Template::full(6, 3).unwrap();
        holey.set_palette(4, &[]).unwrap();
        let g = is_good(&holey, &full6).unwrap();
        assert!(!g.nonempty_on_set && !g.good);
    }

    #[test]
    fn profile_examples() {
        let p = Template::full(10, 4).unwrap();
        let prof = palette_profile(&p, &IntegerSet::full(10));
        assert_eq!((prof.x1, prof.x2, prof.x3), (0, 0, 10));

        let a = IntegerSet::from_members(10, [2, 5, 7]).unwrap();
        let f = Coloring::new(a.clone(), vec![1, 2, 4], 4).unwrap();
        let prof = palette_profile(&Template::from_coloring(&f, 4).unwrap(), &a);
        assert_eq!((prof.x1, prof.x2, prof.x3), (3, 0, 0));

        let mut q = Template::empty(4, 4).unwrap();
        for x in 1..=4 {
            q.set_palette(x, &(1..=x as u32).collect::<Vec<_>>()).unwrap();
        }
        let prof = palette_profile(&q, &IntegerSet::full(4));
        assert_eq!((prof.x1, prof.x2, prof.x3, prof.empty), (1, 1, 2, 0));
    }

    #[test]
    fn pair_palettes() {
        let mut p = Template::empty(10, 4).unwrap();
        for x in 1..=9 {
            p.set_palette(x, &[1, 2]).unwrap();
        }
        p.set_palette(10, &[3, 4]).unwrap();
        let counts = pair_palette_counts(&p, &IntegerSet::full(10));
        assert_eq!(counts[&(1, 2)], 9);
        assert_eq!(counts[&(3, 4)], 1);
        assert_eq!(dominant_pair_palettes(&p, &IntegerSet::full(10), &Ratio::new(1, 20)), vec![(1, 2)]);
        assert!(dominant_pair_palettes(&p, &IntegerSet::full(10), &Ratio::new(0, 1)).is_empty());
    }

    #[test]
    fn json_literal_round_trip() {
        let p = parse_template(r#"{"n": 5, "r": 3, "palettes": {"2": [1, 3], "5": [2]}}"#).unwrap();
        assert_eq!(p.palette(2), vec![1, 3]);
        assert!(p.palette(1).is_empty());
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"n":5,"r":3,"palettes":{"2":[1,3],"5":[2]}}"#);
        assert_eq!(parse_template(&text).unwrap(), p);
        assert!(parse_template(r#"{"n": 5, "r": 3, "palettes": {"6": [1]}}"#).is_err());
        assert!(parse_template(r#"{"n": 5, "r": 3, "palettes": {"2": [4]}}"#).is_err());
    }

    /// Colorings of `A` that are zero-RS singleton subtemplates are exactly the rainbow-free ones.
    #[test]
    fn coloring_bridge_small() {
        for mask in 0u64..1 << 6 {
            let a = IntegerSet::from_mask(6, mask);
            let k = a.len() as u32;
            let mut zero_rs = 0u64;
            for code in 0..3u64.pow(k) {
                let colors: Vec<u32> = (0..k).map(|i| (code / 3u64.pow(i) % 3) as u32 + 1).collect();
                let f = Coloring::new(a.clone(), colors, 3).unwrap();
                let p = Template::from_coloring(&f, 3).unwrap();
                assert!(is_subtemplate(&p, &Template::full(6, 3).unwrap()).unwrap());
                let free = rs_count_within(&p, &a).is_zero();
                assert_eq!(free, f.is_rainbow_sum_free());
                zero_rs += free as u64;
            }
            assert_eq!(BigCount::from(zero_rs), count_naive(&a, 3));
        }
    }
}
