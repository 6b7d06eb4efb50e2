use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rat, int, sign, Rat};

/// Univariate polynomial with rational coefficients, stored low degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPolynomial {
    coeffs: Vec<Rat>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RatPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        RatPolynomial::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        RatPolynomial::new(vec![Rat::zero(), Rat::one()])
    }

    /// `t - r`.
    pub fn linear_root(r: &Rat) -> Self {
        RatPolynomial::new(vec![-r.clone(), Rat::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RatPolynomial::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn sign_at_rational(&self, t: &Rat) -> i8 {
        sign(&self.eval(t))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        RatPolynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        RatPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(Rat::one() / lc))
    }

    /// Euclidean division `self = q * d + r`.
    pub fn div_rem(&self, d: &RatPolynomial) -> (RatPolynomial, RatPolynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPolynomial::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (RatPolynomial::new(quot), RatPolynomial::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPolynomial) -> RatPolynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The square-free part `p / gcd(p, p')`, made monic.
    pub fn square_free(&self) -> RatPolynomial {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm chain of `self`.
    pub fn sturm_chain(&self) -> Vec<RatPolynomial> {
        let mut chain = vec![self.clone()];
        if self.is_constant() {
            return chain;
        }
        chain.push(self.derivative());
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        chain
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_half_open(&self, a: &Rat, b: &Rat) -> usize {
        if self.is_zero() {
            panic!("root count of the zero polynomial");
        }
        let chain = self.sturm_chain();
        let va = sign_variations(&chain, a);
        let vb = sign_variations(&chain, b);
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots in the closed interval `[a, b]`.
    pub fn count_roots_closed(&self, a: &Rat, b: &Rat) -> usize {
        let at_a = usize::from(self.eval(a).is_zero());
        if a == b {
            return at_a;
        }
        at_a + self.count_roots_half_open(a, b)
    }

    /// Cauchy bound: every real root has absolute value below this.
    pub fn root_bound(&self) -> Rat {
        let lc = self.leading().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let v = c.abs() / &lc;
            if v > m {
                m = v;
            }
        }
        m + Rat::one()
    }

    /// Composition with an affine map `t -> a t + b`.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> RatPolynomial {
        let lin = RatPolynomial::new(vec![b.clone(), a.clone()]);
        let mut acc = RatPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &RatPolynomial::constant(c.clone());
        }
        acc
    }
}

fn sign_variations(chain: &[RatPolynomial], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = p.sign_at_rational(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

impl fmt::Debug for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rat(c))?,
                1 => write!(f, "({})t", format_rat(c))?,
                _ => write!(f, "({})t^{}", format_rat(c), i)?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a RatPolynomial> for &'a RatPolynomial {
    type Output = RatPolynomial;
    fn add(self, o: &RatPolynomial) -> RatPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        RatPolynomial::new(c)
    }
}

impl<'a> Sub<&'a RatPolynomial> for &'a RatPolynomial {
    type Output = RatPolynomial;
    fn sub(self, o: &RatPolynomial) -> RatPolynomial {
        self + &(-o.clone())
    }
}

impl<'a> Mul<&'a RatPolynomial> for &'a RatPolynomial {
    type Output = RatPolynomial;
    fn mul(self, o: &RatPolynomial) -> RatPolynomial {
        if self.is_zero() || o.is_zero() {
            return RatPolynomial::zero();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPolynomial::new(c)
    }
}

impl Add for RatPolynomial {
    type Output = RatPolynomial;
    fn add(self, o: RatPolynomial) -> RatPolynomial {
        &self + &o
    }
}

impl Sub for RatPolynomial {
    type Output = RatPolynomial;
    fn sub(self, o: RatPolynomial) -> RatPolynomial {
        &self - &o
    }
}

impl Mul for RatPolynomial {
    type Output = RatPolynomial;
    fn mul(self, o: RatPolynomial) -> RatPolynomial {
        &self * &o
    }
}

impl Neg for RatPolynomial {
    type Output = RatPolynomial;
    fn neg(self) -> RatPolynomial {
        RatPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}
