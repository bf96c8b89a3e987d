//! Curve fixtures: a polynomial `f(t)` together with sections `(X_i, Y_i)` of
//! `Y² = κ_i X³ + f(t)` over `Q(t)`.
//!
//! Each section gives the divisor class `⅓ div(y - Y_i)` on the hyperelliptic
//! curve `y² = f(t)`. The twist `κ_i` is 1 except for families where `Y_i² - f`
//! is a constant multiple of a cube; such constants have trivial divisor, so the
//! class is unaffected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{q, qi};
use crate::arith::{parse_rational, BigRational, RatFunc, RationalPoly};
use crate::error::{Error, Result};
use crate::mestre::{expand_sextic, mestre_parametrization, to_weierstrass, Origin};

/// A section of `Y² = κ X³ + f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: RatFunc,
    pub y: RatFunc,
    pub kappa: BigRational,
}

impl CurvePoint {
    pub fn new(x: RatFunc, y: RatFunc) -> Self {
        CurvePoint { x, y, kappa: BigRational::one() }
    }

    /// Recovers `X` from `Y` as the cube root of `(Y² - f) / κ`.
    pub fn from_y(f: &RationalPoly, y: RatFunc, kappa: BigRational) -> Result<Self> {
        if kappa.is_zero() {
            return Err(Error::Degenerate("twist kappa = 0".into()));
        }
        let diff = &y.pow(2) - &RatFunc::from_poly(f.clone());
        let x = diff.scale(&kappa.recip()).cube_root()?;
        Ok(CurvePoint { x, y, kappa })
    }

    /// Checks `Y² = κ X³ + f` exactly.
    pub fn satisfies(&self, f: &RationalPoly) -> bool {
        self.y.pow(2) == &self.x.pow(3).scale(&self.kappa) + &RatFunc::from_poly(f.clone())
    }

    /// Writes `X = a / d²`, `Y = b / d³` with `d` the cube root of the denominator of `Y`.
    pub fn parts(&self) -> Result<SectionParts> {
        let d = self.y.den().cube_root().map_err(|_| Error::CorruptFixture("denominator of Y is not a cube".into()))?;
        if self.x.den() != &(&d * &d) {
            return Err(Error::CorruptFixture("denominator of X is not d^2".into()));
        }
        Ok(SectionParts { a: self.x.num().clone(), b: self.y.num().clone(), d })
    }

    pub fn substitute_power(&self, k: usize) -> Self {
        CurvePoint { x: self.x.substitute_power(k), y: self.y.substitute_power(k), kappa: self.kappa.clone() }
    }
}

/// Polynomial data of a section: `X = a / d²`, `Y = b / d³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionParts {
    pub a: RationalPoly,
    pub b: RationalPoly,
    pub d: RationalPoly,
}

/// How the listed sections define divisor classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassLayout {
    /// Class `i` is `⅓ div(y - Y_i)`.
    Direct,
    /// Class `i` is `⅓ div(y - Y_i) - ⅓ div(y - Y_last)`, for `i < last`.
    DifferenceWithLast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFixture {
    pub label: String,
    pub f: RationalPoly,
    pub points: Vec<CurvePoint>,
    pub layout: ClassLayout,
    /// Free-form provenance (scalings, substitutions).
    pub notes: Vec<String>,
}

impl CurveFixture {
    pub fn new(label: &str, f: RationalPoly, points: Vec<CurvePoint>) -> Self {
        CurveFixture { label: label.to_string(), f, points, layout: ClassLayout::Direct, notes: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap_or(0)
    }

    /// Genus of `y² = f(t)`.
    pub fn genus(&self) -> usize {
        self.degree().saturating_sub(1) / 2
    }

    /// Number of divisor classes the fixture defines.
    pub fn class_count(&self) -> usize {
        match self.layout {
            ClassLayout::Direct => self.points.len(),
            ClassLayout::DifferenceWithLast => self.points.len().saturating_sub(1),
        }
    }

    /// Every section satisfies its curve identity and `f` is nonconstant.
    pub fn verify(&self) -> Result<()> {
        if self.f.is_constant() {
            return Err(Error::CorruptFixture(format!("{}: f is constant", self.label)));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !p.satisfies(&self.f) {
                return Err(Error::CorruptFixture(format!("{}: point {} fails Y^2 = kX^3 + f", self.label, i + 1)));
            }
        }
        Ok(())
    }

    /// `t ↦ t^k` applied to `f` and every section.
    pub fn substitute_power(&self, k: usize, label: &str) -> Self {
        let mut out = CurveFixture {
            label: label.to_string(),
            f: self.f.substitute_power(k),
            points: self.points.iter().map(|p| p.substitute_power(k)).collect(),
            layout: self.layout,
            notes: self.notes.clone(),
        };
        out.notes.push(format!("substituted t -> t^{k}"));
        out
    }

    /// Text form: a header, `f:` and one `Y_i:` line per section.
    pub fn to_text(&self) -> String {
        let arr = |p: &RationalPoly| serde_json::to_string(&p.to_strings()).unwrap();
        let mut s = format!("curve {} degree {}\n", self.label, self.degree());
        if self.layout == ClassLayout::DifferenceWithLast {
            s.push_str("layout: differences\n");
        }
        s.push_str(&format!("f: {}\n", arr(&self.f)));
        for (i, p) in self.points.iter().enumerate() {
            s.push_str(&format!("Y_{}: {} / {}", i + 1, arr(p.y.num()), arr(p.y.den())));
            if !p.kappa.is_one() {
                s.push_str(&format!(" kappa {}", p.kappa));
            }
            s.push('\n');
        }
        s
    }

    /// Parses [`CurveFixture::to_text`] output, reconstructing each `X_i`.
    pub fn from_text(text: &str) -> Result<Self> {
        let corrupt = |m: &str| Error::CorruptFixture(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| corrupt("empty fixture"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "curve" || h[2] != "degree" {
            return Err(corrupt(&format!("bad header {header:?}")));
        }
        let label = h[1].to_string();
        let degree: usize = h[3].parse().map_err(|_| corrupt("bad degree"))?;
        let poly = |s: &str| -> Result<RationalPoly> {
            let v: Vec<String> = serde_json::from_str(s.trim())?;
            RationalPoly::from_strings(&v)
        };
        let mut f = None;
        let mut layout = ClassLayout::Direct;
        let mut ys = Vec::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix("f:") {
                f = Some(poly(rest)?);
            } else if let Some(rest) = line.strip_prefix("layout:") {
                layout = match rest.trim() {
                    "differences" => ClassLayout::DifferenceWithLast,
                    "direct" => ClassLayout::Direct,
                    other => return Err(corrupt(&format!("unknown layout {other}"))),
                };
            } else if line.starts_with("Y_") {
                let (_, rest) = line.split_once(':').ok_or_else(|| corrupt(line))?;
                let (frac, kappa) = match rest.split_once("kappa") {
                    Some((a, k)) => (a, parse_rational(k)?),
                    None => (rest, BigRational::one()),
                };
                let (n, d) = frac.split_once("] / [").ok_or_else(|| corrupt(line))?;
                ys.push((RatFunc::new(poly(&format!("{n}]"))?, poly(&format!("[{d}"))?)?, kappa));
            } else {
                return Err(corrupt(&format!("unexpected line {line:?}")));
            }
        }
        let f = f.ok_or_else(|| corrupt("missing f"))?;
        if f.degree() != Some(degree) {
            return Err(corrupt("degree does not match f"));
        }
        let points = ys
            .into_iter()
            .map(|(y, k)| CurvePoint::from_y(&f, y, k))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| corrupt(&format!("{label}: {e}")))?;
        let fx = CurveFixture { label, f, points, layout, notes: Vec::new() };
        fx.verify()?;
        Ok(fx)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// The fixtures known to the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureSpec {
    /// `y² = t³ + (t + a)²/4`.
    F1 { a: BigRational },
    /// `y² = t⁶ + a t³ + b²`.
    F2 { a: BigRational, b: BigRational },
    F3,
    F4,
    F5,
    /// Degree 30 curve from the Mestre family at `u = -9/5` with `t ↦ t³`.
    Deg30,
    /// Mestre family at `u = 2` (degree 10, six sections).
    MestreU2,
    /// `f_3(t²)` built from the sextic with roots `1, 2, -3, 0, t, -t`.
    F3Constructed,
}

impl FixtureSpec {
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureSpec::F1 { a } => write!(f, "f1({a})"),
            FixtureSpec::F2 { a, b } => write!(f, "f2({a},{b})"),
            FixtureSpec::F3 => write!(f, "f3"),
            FixtureSpec::F4 => write!(f, "f4"),
            FixtureSpec::F5 => write!(f, "f5"),
            FixtureSpec::Deg30 => write!(f, "deg30"),
            FixtureSpec::MestreU2 => write!(f, "mestre-u2"),
            FixtureSpec::F3Constructed => write!(f, "f3-constructed"),
        }
    }
}

impl FromStr for FixtureSpec {
    type Err = Error;
    /// Accepts `f3`, `f1(2)`, `f2(-5,1)`, and defaults `f1` = `f1(2)`, `f2` = `f2(-5,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((n, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| Error::UnknownFixture(s.into()))?;
                let args = inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
                (n, args)
            }
            None => (s, Vec::new()),
        };
        let arg = |i: usize, default: i64| args.get(i).cloned().unwrap_or_else(|| qi(default));
        Ok(match name {
            "f1" => FixtureSpec::F1 { a: arg(0, 2) },
            "f2" => FixtureSpec::F2 { a: arg(0, -5), b: arg(1, 1) },
            "f3" => FixtureSpec::F3,
            "f4" => FixtureSpec::F4,
            "f5" => FixtureSpec::F5,
            "deg30" => FixtureSpec::Deg30,
            "mestre-u2" => FixtureSpec::MestreU2,
            "f3-constructed" => FixtureSpec::F3Constructed,
            _ => return Err(Error::UnknownFixture(s.into())),
        })
    }
}

fn ints(c: &[&str]) -> RationalPoly {
    RationalPoly::from_bigints(&c.iter().map(|s| s.parse::<BigInt>().unwrap()).collect::<Vec<_>>())
}

/// `f_3`, ascending coefficients.
pub fn f3_poly() -> RationalPoly {
    RationalPoly::from_ints(&[11764900, 0, 0, -369249, 0, 0, 2973, 0, 0, 1])
}

/// Fourth section of `f_3`: the chord sum of the last two sections of the
/// constructed model, rewritten in `t² ↦ t`.
fn f3_fourth_y() -> RatFunc {
    let num = ints(&[
        "25726421655424",
        "1077461849856",
        "3040485869568",
        "-1229509290864",
        "-14524945824",
        "-130076962752",
        "25197411957",
        "401031570",
        "1749141561",
        "-267790750",
        "-19253886",
        "-5498070",
        "1041693",
        "212802",
        "-22926",
        "3714",
        "57",
        "-6",
        "1",
    ]);
    let base = RationalPoly::from_ints(&[826, -164, -24, -14, 1]);
    let den = base.pow(3).scale(&qi(8));
    RatFunc::new(num, den).unwrap()
}

fn f3_fixture() -> Result<CurveFixture> {
    let f = f3_poly();
    let ys = [
        RatFunc::from_poly(RationalPoly::from_ints(&[3430, 0, 0, -106, 0, 0, 1])),
        RatFunc::from_poly(RationalPoly::new(vec![
            qi(3430),
            qi(0),
            qi(0),
            q(269, 4),
            qi(0),
            qi(0),
            q(1, 64),
        ])),
        RatFunc::from_poly(RationalPoly::from_ints(&[40474, 33264, 13914, 3350, 486, 36, 1])),
        -&f3_fourth_y(),
    ];
    let points = ys.into_iter().map(|y| CurvePoint::from_y(&f, y, BigRational::one())).collect::<Result<_>>()?;
    Ok(CurveFixture::new("f3", f, points))
}

pub fn f4_poly() -> RationalPoly {
    ints(&[
        "543592155691663960065241800360826161610140961",
        "-135004259433655686521826532061360904927910680",
        "14597743197263467927181474503046907251979462",
        "-1509800364506319291441531124462079071041720",
        "139665528153448288531118705650287136663899",
        "-8471956828413213486742748322179256745500",
        "486933739385947419621206507920009537350",
        "-23227949011157855871750302161149318060",
        "767540949843094964859507359162484321",
        "-14476726558441542259500980593582900",
        "127358629188153017343112694654244",
    ])
}

fn f4_ys() -> Vec<RationalPoly> {
    [
        [
            "23315023973129417008893",
            "-2894185136924624900028",
            "124175441794992816207",
            "11259180860536474740",
            "-612703879315493343",
            "11285328049647162",
        ],
        [
            "-23315023973129417008893",
            "2895345088136314829232",
            "-133140352448943347487",
            "15898504501345253760",
            "-637837872300913137",
            "11285328049647162",
        ],
        [
            "-23295069079544963156463",
            "2891689893601551455028",
            "-132367737077167916373",
            "15779426445792454284",
            "-641395912765696179",
            "11285328049647162",
        ],
        [
            "-35358708563462647994607",
            "2621647313739427449588",
            "-219254957235699134757",
            "14665379977955069244",
            "-787772412770249571",
            "11285328049647162",
        ],
        [
            "183122730884960782522323",
            "17007935571912588694272",
            "1831498005344531215377",
            "74598289369102611840",
            "2985212511317920527",
            "11285328049647162",
        ],
    ]
    .iter()
    .map(|c| ints(c))
    .collect()
}

fn f4_fixture() -> Result<CurveFixture> {
    let f = f4_poly();
    let points = f4_ys()
        .into_iter()
        .map(|y| CurvePoint::from_y(&f, RatFunc::from_poly(y), BigRational::one()))
        .collect::<Result<_>>()?;
    let mut fx = CurveFixture::new("f4", f, points);
    fx.layout = ClassLayout::DifferenceWithLast;
    Ok(fx)
}

fn f1_fixture(a: &BigRational) -> CurveFixture {
    // f = t³ + (t + a)²/4, section (X, Y) = (-t, (t + a)/2)
    let lin = RationalPoly::new(vec![a.clone(), qi(1)]);
    let f = &RationalPoly::monomial(qi(1), 3) + &(&lin * &lin).scale(&q(1, 4));
    let pt = CurvePoint::new(RatFunc::from_poly(RationalPoly::monomial(qi(-1), 1)), RatFunc::from_poly(lin.scale(&q(1, 2))));
    CurveFixture::new(&format!("f1({a})"), f, vec![pt])
}

fn f2_fixture(a: &BigRational, b: &BigRational) -> Result<CurveFixture> {
    // Y = t³ ± b gives Y² - f = (±2b - a) t³
    let f = RationalPoly::new(vec![b * b, qi(0), qi(0), a.clone(), qi(0), qi(0), qi(1)]);
    let mut points = Vec::new();
    for sign in [1i64, -1] {
        let kappa = qi(2 * sign) * b - a;
        if kappa.is_zero() {
            return Err(Error::Degenerate(format!("f2({a},{b}): section with Y^2 = f")));
        }
        let y = RationalPoly::new(vec![b * qi(sign), qi(0), qi(0), qi(1)]);
        points.push(CurvePoint::new(RatFunc::x(), RatFunc::from_poly(y)).with_kappa(kappa));
    }
    let fx = CurveFixture::new(&format!("f2({a},{b})"), f, points);
    fx.verify()?;
    Ok(fx)
}

impl CurvePoint {
    fn with_kappa(mut self, kappa: BigRational) -> Self {
        self.kappa = kappa;
        self
    }
}

/// Degree 10 model of the Mestre family at parameter `u`, origin at infinity.
pub fn mestre_fixture(u: &BigRational, label: &str) -> Result<CurveFixture> {
    let model = expand_sextic(&mestre_parametrization(&RatFunc::x(), u)?)?;
    let mut fx = to_weierstrass(&model, Origin::Infinity, label)?;
    fx.notes.insert(0, format!("Mestre family at u = {u}, origin at infinity"));
    fx.verify()?;
    Ok(fx)
}

fn deg30_fixture() -> Result<CurveFixture> {
    let base = mestre_fixture(&q(-9, 5), "deg30-base")?;
    let fx = base.substitute_power(3, "deg30");
    fx.verify()?;
    Ok(fx)
}

fn f3_constructed() -> Result<CurveFixture> {
    let t = RatFunc::x();
    let k = |n: i64| RatFunc::constant(qi(n));
    let model = expand_sextic(&crate::mestre::MestreInput::new([k(1), k(2), k(-3), k(0), t]))?;
    to_weierstrass(&model, Origin::Marked(0), "f3-constructed")
}

/// Builds and verifies a fixture. The Mestre-derived curves are built once per
/// process and cached.
pub fn load_fixture(spec: &FixtureSpec) -> Result<CurveFixture> {
    static DEG30: OnceLock<std::result::Result<CurveFixture, String>> = OnceLock::new();
    static F5: OnceLock<std::result::Result<CurveFixture, String>> = OnceLock::new();
    let cached = |cell: &'static OnceLock<std::result::Result<CurveFixture, String>>, build: fn() -> Result<CurveFixture>| {
        cell.get_or_init(|| build().map_err(|e| e.to_string())).clone().map_err(Error::CorruptFixture)
    };
    let fx = match spec {
        FixtureSpec::F1 { a } => f1_fixture(a),
        FixtureSpec::F2 { a, b } => f2_fixture(a, b)?,
        FixtureSpec::F3 => f3_fixture()?,
        FixtureSpec::F4 => f4_fixture()?,
        FixtureSpec::F5 => cached(&F5, || {
            let mut fx = f4_fixture()?.substitute_power(3, "f5");
            fx.layout = ClassLayout::Direct;
            Ok(fx)
        })?,
        FixtureSpec::Deg30 => cached(&DEG30, deg30_fixture)?,
        FixtureSpec::MestreU2 => {
            // degree 10 with sections of degree 5: only differences are 3-divisible
            let mut fx = mestre_fixture(&qi(2), "mestre-u2")?;
            fx.layout = ClassLayout::DifferenceWithLast;
            fx
        }
        FixtureSpec::F3Constructed => f3_constructed()?,
    };
    fx.verify()?;
    Ok(fx)
}

/// Labels accepted by [`load_fixture`] via [`FixtureSpec::from_str`].
pub const FIXTURE_LABELS: &[&str] = &["f1", "f2", "f3", "f4", "f5", "deg30", "mestre-u2", "f3-constructed"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f3_data() {
        let fx = load_fixture(&FixtureSpec::F3).unwrap();
        assert_eq!(fx.degree(), 9);
        assert_eq!(fx.genus(), 4);
        assert_eq!(fx.points.len(), 4);
        assert_eq!(fx.points[0].x, RatFunc::from_poly(RationalPoly::from_ints(&[0, -71, 0, 0, 1])));
        assert_eq!(fx.f.eval(&qi(0)), qi(11764900));
        assert!(fx.f.is_squarefree());
    }

    #[test]
    fn f4_f5_data() {
        let f4 = load_fixture(&FixtureSpec::F4).unwrap();
        assert_eq!((f4.degree(), f4.genus(), f4.class_count()), (10, 4, 4));
        let f5 = load_fixture(&FixtureSpec::F5).unwrap();
        assert_eq!((f5.degree(), f5.genus(), f5.class_count()), (30, 14, 5));
        assert_eq!(f5.points[0].x.num().degree(), Some(9));
    }

    #[test]
    fn small_families() {
        let f1 = load_fixture(&"f1(2)".parse().unwrap()).unwrap();
        // y² = t³ + (t+2)²/4 passes through (0, 1)
        assert_eq!(f1.f.eval(&qi(0)), qi(1));
        assert_eq!(f1.points[0].y.eval(&qi(0)), Some(qi(1)));
        let f2 = load_fixture(&"f2(-5,1)".parse().unwrap()).unwrap();
        assert_eq!(f2.points[0].kappa, qi(7));
        assert_eq!(f2.points[1].kappa, qi(3));
        assert!(load_fixture(&"f2(2,1)".parse().unwrap()).is_err());
        assert!("g7".parse::<FixtureSpec>().is_err());
    }

    #[test]
    fn fourth_f3_section_is_a_chord_sum() {
        // P4 + P5 on the constructed model y² = x³ + f3(t²) equals ±(X4, Y4)(t²)
        let c = load_fixture(&FixtureSpec::F3Constructed).unwrap();
        let (p, r) = (&c.points[3], &c.points[4]);
        let l = &(&r.y - &p.y) / &(&r.x - &p.x);
        let x3 = &(&l.pow(2) - &p.x) - &r.x;
        let y3 = -&(&p.y + &(&l * &(&x3 - &p.x)));
        let y4 = f3_fourth_y().substitute_power(2);
        assert!(y3 == y4 || y3 == -&y4);
        let fx = load_fixture(&FixtureSpec::F3).unwrap();
        assert_eq!(fx.points[3].x.substitute_power(2), x3);
    }

    #[test]
    fn text_roundtrip() {
        for spec in [FixtureSpec::F3, FixtureSpec::F4, "f2(-5,1)".parse().unwrap()] {
            let fx = load_fixture(&spec).unwrap();
            let back = CurveFixture::from_text(&fx.to_text()).unwrap();
            assert_eq!(back.f, fx.f);
            assert_eq!(back.points, fx.points);
            assert_eq!(back.layout, fx.layout);
        }
    }

    #[test]
    fn corrupt_text_is_rejected() {
        let fx = load_fixture(&FixtureSpec::F3).unwrap();
        let bad = fx.to_text().replace("\"-106\"", "\"-107\"");
        assert!(matches!(CurveFixture::from_text(&bad), Err(Error::CorruptFixture(_))));
        assert!(CurveFixture::from_text("curve x degree 2\n").is_err());
    }

    #[test]
    fn mestre_u2_has_six_sections() {
        let fx = load_fixture(&FixtureSpec::MestreU2).unwrap();
        assert_eq!(fx.points.len(), 6);
        assert!(fx.f.to_integer_coeffs().is_some());
    }
}

#[cfg(test)]
mod deg30_tests {
    use super::*;
    use crate::arith::rational::rational_valuation;
    use num_integer::Integer;
    use num_traits::Signed;

    #[test]
    fn deg30_facts() {
        let fx = load_fixture(&FixtureSpec::Deg30).unwrap();
        assert_eq!(fx.degree(), 30);
        assert_eq!(fx.points.len(), 6);
        assert!(fx.f.to_integer_coeffs().is_some());
        assert!(fx.f.lead().is_positive());
        let f0 = fx.f.eval(&qi(0));
        let f1 = fx.f.eval(&qi(1));
        assert!(f0.is_negative());
        assert_eq!(rational_valuation(&f0, &BigInt::from(2)).unwrap(), 3);
        assert_eq!(rational_valuation(&f0, &BigInt::from(5)).unwrap(), 12);
        let g = f0.to_integer().gcd(&f1.to_integer());
        assert_eq!(g, BigInt::from(4 * 625));
    }
}
