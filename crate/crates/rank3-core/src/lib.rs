//! Quadratic fields with large 3-rank from 3-torsion on hyperelliptic Jacobians.
//!
//! The pipeline runs from curve data to class-group certificates:
//!
//! * [`arith`] — exact rationals, polynomials over `Q` and `F_p`, factorization;
//! * [`mestre`] and [`fixture`] — the curves `y² = f(t)` with rational sections
//!   `(X_i, Y_i)` such that `Y_i² - f = κ X_i³`;
//! * [`jacobian`] — Cantor arithmetic over `F_p` certifying the 3-torsion rank of
//!   the section classes;
//! * [`descent`] — exceptional sets, local hypotheses and admissible windows;
//! * [`qform`] — binary quadratic forms, small class groups and rank certificates;
//! * [`specialize`] — specialization `t ↦ Q(√f(t))`, explicit ideal classes and
//!   the enumeration harness.

pub mod arith;
pub mod descent;
pub mod error;
pub mod fixture;
pub mod jacobian;
pub mod mestre;
pub mod qform;
pub mod specialize;

pub use arith::{
    factor_integer, parse_rational, BigRational, FactorEffort, FactorHints, FactoredInteger, FpPoly, RationalPoly,
};
pub use descent::{check_hypotheses, HypothesisReport, PAdicWindow, TorsionClassData};
pub use error::{Error, Result};
pub use fixture::{load_fixture, CurveFixture, CurvePoint, FixtureSpec, FIXTURE_LABELS};
pub use jacobian::{verify_torsion, MumfordDivisor, OddModel, TorsionReport};
pub use qform::{class_group_small, rank3_certificate, scholz_check, QuadForm, Rank3Certificate, SmallClassGroup};
pub use specialize::{
    certify_field, enumeration_harness, field_from_t, CandidateT, CertificateStore, FieldData, HarnessConfig,
    HarnessSummary, Level, RankCertificate, Skip, StreamPolicy,
};
