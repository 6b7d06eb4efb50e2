use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use super::{RatPolynomial, RootError};
use crate::rational::{format_rat, int, sign, to_f64, Rat};

/// Which value of a polynomial to read at an algebraic time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// The value at the time itself.
    At,
    /// The one-sided limit from the left.
    JustBefore,
    /// The one-sided limit from the right.
    JustAfter,
}

#[derive(Clone)]
struct Interval {
    lo: Rat,
    hi: Rat,
}

/// A real algebraic number, used as a time value.
///
/// Invariant: `poly` is monic and square-free, `[lo, hi]` contains exactly one
/// of its roots, and unless `lo == hi` neither endpoint is a root. The
/// interval is only ever narrowed.
pub struct AlgebraicTime {
    poly: RatPolynomial,
    interval: Mutex<Interval>,
}

impl Clone for AlgebraicTime {
    fn clone(&self) -> Self {
        AlgebraicTime {
            poly: self.poly.clone(),
            interval: Mutex::new(self.snapshot()),
        }
    }
}

impl AlgebraicTime {
    pub fn from_rational(r: Rat) -> Self {
        AlgebraicTime {
            poly: RatPolynomial::linear_root(&r),
            interval: Mutex::new(Interval { lo: r.clone(), hi: r }),
        }
    }

    pub fn from_int(v: i64) -> Self {
        AlgebraicTime::from_rational(int(v))
    }

    fn isolated(poly: RatPolynomial, lo: Rat, hi: Rat) -> Self {
        if lo == hi {
            return AlgebraicTime::from_rational(lo);
        }
        AlgebraicTime {
            poly,
            interval: Mutex::new(Interval { lo, hi }),
        }
    }

    fn snapshot(&self) -> Interval {
        self.interval.lock().expect("interval lock").clone()
    }

    /// Defining square-free polynomial.
    pub fn poly(&self) -> &RatPolynomial {
        &self.poly
    }

    /// Current isolating interval.
    pub fn interval(&self) -> (Rat, Rat) {
        let i = self.snapshot();
        (i.lo, i.hi)
    }

    /// The time as a rational, when it is a root of a linear polynomial or
    /// its interval has collapsed to a point.
    pub fn exact(&self) -> Option<Rat> {
        if self.poly.degree() == Some(1) {
            let c = self.poly.coeffs();
            return Some(-(&c[0] / &c[1]));
        }
        let i = self.snapshot();
        if i.lo == i.hi {
            Some(i.lo)
        } else {
            None
        }
    }

    /// Halves the isolating interval (or pins the root when the midpoint hits it).
    pub fn refine(&self) {
        let mut i = self.interval.lock().expect("interval lock");
        if i.lo == i.hi {
            return;
        }
        let mid = (&i.lo + &i.hi) / int(2);
        let vm = sign(&self.poly.eval(&mid));
        if vm == 0 {
            i.lo = mid.clone();
            i.hi = mid;
            return;
        }
        let vl = sign(&self.poly.eval(&i.lo));
        if vl != vm {
            i.hi = mid;
        } else {
            i.lo = mid;
        }
    }

    /// Refines until the interval is narrower than `width`.
    pub fn refine_to(&self, width: &Rat) {
        loop {
            let i = self.snapshot();
            if &(&i.hi - &i.lo) < width {
                return;
            }
            self.refine();
        }
    }

    /// Decimal approximation, advisory only.
    pub fn approx(&self) -> f64 {
        self.refine_to(&Rat::new(1.into(), num_bigint::BigInt::from(1u64 << 52)));
        let i = self.snapshot();
        to_f64(&((&i.lo + &i.hi) / int(2)))
    }

    /// A rational inside the isolating interval at most `width` from the root.
    pub fn rational_near(&self, width: &Rat) -> Rat {
        self.refine_to(width);
        let i = self.snapshot();
        (&i.lo + &i.hi) / int(2)
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &Rat) -> Ordering {
        loop {
            let i = self.snapshot();
            if i.lo == i.hi {
                return i.lo.cmp(r);
            }
            if r < &i.lo {
                return Ordering::Greater;
            }
            if r > &i.hi {
                return Ordering::Less;
            }
            if self.poly.eval(r).is_zero() {
                return Ordering::Equal;
            }
            self.refine();
        }
    }

    /// Exact total order. Equality is decided through the gcd of the defining
    /// polynomials, never by interval width.
    pub fn compare(&self, other: &AlgebraicTime) -> Ordering {
        if std::ptr::eq(self, other) {
            return Ordering::Equal;
        }
        let common = self.poly.gcd(&other.poly);
        let may_be_equal = common.degree().is_some_and(|d| d >= 1);
        let mut checked = false;
        loop {
            let a = self.snapshot();
            let b = other.snapshot();
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if a.lo == a.hi {
                return other.cmp_rational(&a.lo).reverse();
            }
            if b.lo == b.hi {
                return self.cmp_rational(&b.lo);
            }
            if may_be_equal && !checked {
                checked = true;
                let lo = if a.lo > b.lo { a.lo.clone() } else { b.lo.clone() };
                let hi = if a.hi < b.hi { a.hi.clone() } else { b.hi.clone() };
                if common.count_roots_closed(&lo, &hi) > 0 {
                    return Ordering::Equal;
                }
            }
            if &a.hi - &a.lo >= &b.hi - &b.lo {
                self.refine();
            } else {
                other.refine();
            }
        }
    }

    /// Exact sign of `p` at this time, or its one-sided limit.
    pub fn sign_of(&self, p: &RatPolynomial, side: Side) -> i8 {
        if p.is_zero() {
            return 0;
        }
        let s = self.sign_at(p);
        if s != 0 || side == Side::At {
            return s;
        }
        let mut d = p.derivative();
        let mut k = 1u32;
        loop {
            let s = self.sign_at(&d);
            if s != 0 {
                return match side {
                    Side::JustAfter => s,
                    _ => {
                        if k % 2 == 0 {
                            s
                        } else {
                            -s
                        }
                    }
                };
            }
            d = d.derivative();
            k += 1;
        }
    }

    /// Sign of `p` on the isolating interval when `p` has equal signs at
    /// both ends and `|p(mid)|` exceeds a bound on the variation of `p` over
    /// half the interval. Refines a few times before giving up.
    fn sign_by_bound(&self, p: &RatPolynomial) -> Option<i8> {
        let i = self.snapshot();
        let r = Rat::from_integer(i.lo.abs().max(i.hi.abs()).ceil().to_integer());
        let mut slope = Rat::zero();
        let mut pow = Rat::one();
        for (j, c) in p.coeffs().iter().enumerate().skip(1) {
            slope += c.abs() * Rat::from_integer(j.into()) * &pow;
            pow *= &r;
        }
        for _ in 0..4 {
            let i = self.snapshot();
            if i.lo == i.hi {
                return Some(p.sign_at_rational(&i.lo));
            }
            let s = p.sign_at_rational(&i.lo);
            if s == 0 || p.sign_at_rational(&i.hi) != s {
                return None;
            }
            let mid = (&i.lo + &i.hi) / int(2);
            let v = p.eval(&mid).abs();
            if v > &slope * (&i.hi - &i.lo) / int(2) {
                return Some(s);
            }
            self.refine();
        }
        None
    }

    fn sign_at(&self, p: &RatPolynomial) -> i8 {
        if p.is_constant() {
            return sign(&p.leading());
        }
        if let Some(r) = self.exact() {
            return p.sign_at_rational(&r);
        }
        if let Some(s) = self.sign_by_bound(p) {
            return s;
        }
        let g = self.poly.gcd(p);
        if g.degree().is_some_and(|d| d >= 1) {
            let i = self.snapshot();
            if g.count_roots_closed(&i.lo, &i.hi) > 0 {
                return 0;
            }
        }
        let ps = p.square_free();
        loop {
            let i = self.snapshot();
            if i.lo == i.hi {
                return p.sign_at_rational(&i.lo);
            }
            if ps.count_roots_closed(&i.lo, &i.hi) == 0 {
                return p.sign_at_rational(&i.lo);
            }
            self.refine();
        }
    }
}

impl PartialEq for AlgebraicTime {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicTime {}

impl PartialOrd for AlgebraicTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Debug for AlgebraicTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.snapshot();
        if i.lo == i.hi {
            write!(f, "{}", format_rat(&i.lo))
        } else {
            write!(
                f,
                "root of {:?} in [{}, {}]",
                self.poly,
                format_rat(&i.lo),
                format_rat(&i.hi)
            )
        }
    }
}

/// One isolated root of a polynomial.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    pub time: AlgebraicTime,
    /// Set when the root has multiplicity above one in the input polynomial.
    pub multiple: bool,
}

/// All distinct real roots of `p` in the closed window `[lo, hi]`, ascending.
pub fn isolate_roots(p: &RatPolynomial, lo: &Rat, hi: &Rat) -> Result<Vec<IsolatedRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if p.is_constant() || lo > hi {
        return Ok(Vec::new());
    }
    let sf = p.square_free();
    let repeated = p.gcd(&p.derivative());
    let chain = sf.sturm_chain();
    let mut out = Vec::new();
    if sf.eval(lo).is_zero() {
        out.push(AlgebraicTime::from_rational(lo.clone()));
    }
    if lo < hi {
        isolate_rec(&sf, &chain, lo.clone(), hi.clone(), &mut out);
    }
    Ok(out
        .into_iter()
        .map(|time| {
            time.refine_to(&Rat::new(1.into(), 64.into()));
            let multiple = !repeated.is_constant() && time.sign_of(&repeated, Side::At) == 0;
            IsolatedRoot { time, multiple }
        })
        .collect())
}

fn variations(chain: &[RatPolynomial], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for q in chain {
        let s = q.sign_at_rational(x);
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

fn count(chain: &[RatPolynomial], a: &Rat, b: &Rat) -> usize {
    variations(chain, a).saturating_sub(variations(chain, b))
}

fn isolate_rec(sf: &RatPolynomial, chain: &[RatPolynomial], a: Rat, b: Rat, out: &mut Vec<AlgebraicTime>) {
    let c = count(chain, &a, &b);
    if c == 0 {
        return;
    }
    if c == 1 {
        if sf.eval(&b).is_zero() {
            out.push(AlgebraicTime::from_rational(b));
            return;
        }
        let (mut a, mut b) = (a, b);
        while sf.eval(&a).is_zero() {
            let m = (&a + &b) / int(2);
            if sf.eval(&m).is_zero() {
                out.push(AlgebraicTime::from_rational(m));
                return;
            }
            if count(chain, &a, &m) == 1 {
                b = m;
            } else {
                a = m;
            }
        }
        out.push(AlgebraicTime::isolated(sf.clone(), a, b));
        return;
    }
    let m = (&a + &b) / int(2);
    isolate_rec(sf, chain, a, m.clone(), out);
    isolate_rec(sf, chain, m, b, out);
}

impl AlgebraicTime {
    /// Earliest root of `p` strictly after `after` and no later than `until`.
    pub fn first_root_after(
        p: &RatPolynomial,
        after: &AlgebraicTime,
        window_lo: &Rat,
        until: &Rat,
    ) -> Result<Option<IsolatedRoot>, RootError> {
        let roots = isolate_roots(p, window_lo, until)?;
        Ok(roots.into_iter().find(|r| r.time.compare(after) == Ordering::Greater))
    }

    pub fn one() -> Self {
        AlgebraicTime::from_rational(Rat::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p(c: &[i64]) -> RatPolynomial {
        RatPolynomial::from_ints(c)
    }

    #[test]
    fn sqrt_two_is_isolated_in_one_two() {
        let roots = isolate_roots(&p(&[-2, 0, 1]), &int(0), &int(10)).unwrap();
        assert_eq!(roots.len(), 1);
        let (lo, hi) = roots[0].time.interval();
        assert!(lo >= int(1) && hi <= int(2));
        assert!(!roots[0].multiple);
    }

    #[test]
    fn three_roots_in_order() {
        let roots = isolate_roots(&p(&[-6, 11, -6, 1]), &int(0), &int(10)).unwrap();
        let got: Vec<_> = roots.iter().map(|r| r.time.exact()).collect();
        assert_eq!(got.len(), 3);
        assert!(roots[0].time < roots[1].time && roots[1].time < roots[2].time);
        assert_eq!(roots[0].time.cmp_rational(&int(1)), Ordering::Equal);
        assert_eq!(roots[2].time.cmp_rational(&int(3)), Ordering::Equal);
    }

    #[test]
    fn double_root_is_flagged() {
        let roots = isolate_roots(&p(&[1, -2, 1]), &int(0), &int(10)).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].multiple);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert_eq!(
            isolate_roots(&RatPolynomial::zero(), &int(0), &int(1)).unwrap_err(),
            RootError::ZeroPolynomial
        );
    }

    #[test]
    fn sqrt_two_below_three_halves() {
        let r = &isolate_roots(&p(&[-2, 0, 1]), &int(0), &int(10)).unwrap()[0].time;
        assert_eq!(r.cmp_rational(&frac(3, 2)), Ordering::Less);
        assert_eq!(r.compare(&AlgebraicTime::from_rational(frac(3, 2))), Ordering::Less);
    }

    #[test]
    fn proportional_polynomials_define_equal_roots() {
        let a = &isolate_roots(&p(&[-2, 0, 1]), &int(0), &int(10)).unwrap()[0].time;
        let b = &isolate_roots(&p(&[-6, 0, 3]), &int(1), &int(3)).unwrap()[0].time;
        assert_eq!(a.compare(b), Ordering::Equal);
        // and a product polynomial sharing the root
        let c = &isolate_roots(&(p(&[-2, 0, 1]) * p(&[-5, 1])), &int(0), &int(2)).unwrap()[0].time;
        assert_eq!(a.compare(c), Ordering::Equal);
    }

    #[test]
    fn distinct_linear_roots() {
        let a = AlgebraicTime::from_int(1);
        let b = AlgebraicTime::from_int(2);
        assert_eq!(a.compare(&b), Ordering::Less);
    }

    #[test]
    fn signs_at_algebraic_times() {
        let r = &isolate_roots(&p(&[-2, 0, 1]), &int(0), &int(10)).unwrap()[0].time;
        assert_eq!(r.sign_of(&p(&[-2, 0, 1]), Side::At), 0);
        assert_eq!(r.sign_of(&p(&[-1, 1]), Side::At), 1);
        let one = AlgebraicTime::from_int(1);
        assert_eq!(one.sign_of(&p(&[-1, 1]), Side::JustAfter), 1);
        assert_eq!(one.sign_of(&p(&[-1, 1]), Side::JustBefore), -1);
        // (t-1)^2 is positive on both sides
        assert_eq!(one.sign_of(&p(&[1, -2, 1]), Side::JustBefore), 1);
        assert_eq!(one.sign_of(&p(&[1, -2, 1]), Side::JustAfter), 1);
        // t^2 - 2 just after sqrt 2
        assert_eq!(r.sign_of(&p(&[-2, 0, 1]), Side::JustAfter), 1);
        assert_eq!(r.sign_of(&p(&[2, 0, -1]), Side::JustBefore), 1);
    }

    #[test]
    fn first_root_after_skips_current_time() {
        let poly = p(&[2, -3, 1]); // roots 1, 2
        let now = AlgebraicTime::from_int(1);
        let r = AlgebraicTime::first_root_after(&poly, &now, &int(0), &int(5)).unwrap().unwrap();
        assert_eq!(r.time.cmp_rational(&int(2)), Ordering::Equal);
    }
}
