//! One trial per call: draw an instance, evaluate the criterion, evaluate the
//! oracle by direct computation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use super::gen::{Constraint, Gen};
use super::{AlgebraKind, Theorem, TrialConfig, TrialOutcome, Verdict};
use crate::algebra::CommAlgebra;
use crate::block::{displacement_reconstruct, shift, BlockMatrix};
use crate::error::Result;
use crate::laws;
use crate::matrix::DenseMat;
use crate::normality::{circulant_normality, defect_sums, normal_defect, normality_criterion};
use crate::scalar::GaussianRational;
use crate::toeplitz::{displacement_form, sx_displacement_form, ToeplitzSpec};

struct Ctx {
    n: usize,
    d: usize,
    kind: AlgebraKind,
    alg: CommAlgebra,
}

impl Ctx {
    fn draw(config: &TrialConfig, g: &mut Gen) -> Self {
        let n = g.rng().gen_range(config.n_range.clone());
        let d = g.rng().gen_range(config.d_range.clone());
        let kind = *config.algebra_kinds.choose(g.rng()).expect("validated nonempty");
        let alg = g.algebra(kind, d);
        Self { n, d, kind, alg }
    }

    fn json(&self, mut extra: Value) -> Value {
        let obj = extra.as_object_mut().expect("instance is an object");
        obj.insert("n".into(), json!(self.n));
        obj.insert("d".into(), json!(self.d));
        obj.insert("kind".into(), json!(self.kind));
        obj.insert("algebra".into(), serde_json::to_value(self.alg.descriptor()).expect("serializable"));
        extra
    }

    fn spec(&self, g: &mut Gen, constraint: &Constraint) -> Result<ToeplitzSpec> {
        g.spec(&self.alg, self.n, constraint)
    }
}

type Trial = (Value, Verdict, Verdict);

fn verdict(r: Result<bool>) -> Verdict {
    match r {
        Ok(b) => Verdict::Bool(b),
        Err(e) => Verdict::Label(format!("error: {e}")),
    }
}

fn is_toeplitz(m: &BlockMatrix) -> bool {
    ToeplitzSpec::recognize(m, None).is_some()
}

fn product(a: &ToeplitzSpec, b: &ToeplitzSpec) -> BlockMatrix {
    &a.build() * &b.build()
}

/// `c·𝐌` as a spec: the upper vector scales by `c̄`.
fn scale_spec(spec: &ToeplitzSpec, c: &GaussianRational) -> ToeplitzSpec {
    let cbar = c.conj();
    ToeplitzSpec::new(
        spec.diag().scale(c),
        spec.lower_entries().iter().map(|m| m.scale(c)).collect(),
        spec.upper_entries().iter().map(|m| m.scale(&cbar)).collect(),
    )
    .expect("shape unchanged")
}

/// A pair whose product is block Toeplitz.
fn toeplitz_pair(ctx: &Ctx, g: &mut Gen) -> Result<(ToeplitzSpec, ToeplitzSpec, &'static str)> {
    let x = g.commutant_element(&ctx.alg);
    let (ca, cb, family) = match g.index(5) {
        0 => (Constraint::LowerOnly, Constraint::LowerOnly, "lower"),
        1 => (Constraint::UpperOnly, Constraint::UpperOnly, "upper"),
        2 => (Constraint::SxCommutant(x.clone()), Constraint::SxCommutant(x), "sx"),
        3 => (Constraint::SxStarCommutant(x.clone()), Constraint::SxStarCommutant(x), "sx_star"),
        _ => (Constraint::DiagonalOnly, Constraint::None, "diagonal"),
    };
    let (a, b) = (ctx.spec(g, &ca)?, ctx.spec(g, &cb)?);
    Ok(if g.coin() { (a, b, family) } else { (b, a, family) })
}

/// A spec that is normal by construction.
fn normal_spec(ctx: &Ctx, g: &mut Gen) -> Result<(ToeplitzSpec, &'static str)> {
    Ok(match g.index(4) {
        0 => (ctx.spec(g, &Constraint::Hermitian)?, "hermitian"),
        1 => {
            let h = ctx.spec(g, &Constraint::Hermitian)?;
            let u = g.unit_scalar();
            (scale_spec(&h, &u), "scaled_hermitian")
        }
        2 => {
            let x = g.unitary(&ctx.alg);
            (ctx.spec(g, &Constraint::SxCommutant(x))?, "sx_unitary")
        }
        _ => {
            let c = g.unit_scalar();
            (ctx.spec(g, &Constraint::Rotated(c))?, "rotated")
        }
    })
}

/// `M − S·M·S*` by explicit multiplication.
fn direct_displacement(m: &BlockMatrix) -> BlockMatrix {
    let s = shift(m.n(), m.d());
    m - &(&(&s * m) * &s.adjoint())
}

fn reconstruction(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let m = g.block_matrix(ctx.n, ctx.d);
    let ok = displacement_reconstruct(&direct_displacement(&m)) == m;
    Ok((json!({ "matrix": m }), ok.into(), true.into()))
}

fn displacement_form_trial(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let mut m = ctx.spec(g, &Constraint::None)?.build();
    if !satisfy {
        m = g.perturb(&m, Some(&ctx.alg));
    }
    let criterion = displacement_form(&m).is_some();
    Ok((json!({ "matrix": m }), criterion.into(), is_toeplitz(&m).into()))
}

fn product_displacement(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (c, d) = (ctx.spec(g, &Constraint::None)?, ctx.spec(g, &Constraint::None)?);
    let ok = laws::product_displacement_rhs(&c, &d).map(|rhs| rhs == direct_displacement(&product(&c, &d)));
    Ok((json!({ "C": c, "D": d }), verdict(ok), true.into()))
}

fn difference_toeplitz(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (a, b, mut c, mut d, family) = match g.index(3) {
        0 => {
            // C = (C_0, tA, sΩ), D = (D_0, B/s̄, Λ/t̄) leaves both sides equal.
            let (a, b) = (ctx.spec(g, &Constraint::None)?, ctx.spec(g, &Constraint::None)?);
            let (t, s) = (g.nonzero_scalar(), g.nonzero_scalar());
            let inv_bar = |z: &GaussianRational| z.conj().inv().expect("nonzero");
            let scaled = |v: &[DenseMat], z: &GaussianRational| v.iter().map(|m| m.scale(z)).collect::<Vec<_>>();
            let c =
                ToeplitzSpec::new(g.element(&ctx.alg), scaled(a.lower_entries(), &t), scaled(a.upper_entries(), &s))?;
            let d = ToeplitzSpec::new(
                g.element(&ctx.alg),
                scaled(b.lower_entries(), &inv_bar(&s)),
                scaled(b.upper_entries(), &inv_bar(&t)),
            )?;
            (a, b, c, d, "scaled")
        }
        1 => {
            let (a, b, _) = toeplitz_pair(ctx, g)?;
            let (c, d, _) = toeplitz_pair(ctx, g)?;
            (a, b, c, d, "toeplitz_products")
        }
        _ => {
            let (a, b) = (ctx.spec(g, &Constraint::None)?, ctx.spec(g, &Constraint::None)?);
            let c = a.with_diag(g.element(&ctx.alg))?;
            let d = b.with_diag(g.element(&ctx.alg))?;
            (a, b, c, d, "diagonal_shift")
        }
    };
    if !satisfy {
        if g.coin() {
            c = g.perturb_spec(&c, &ctx.alg);
        } else {
            d = g.perturb_spec(&d, &ctx.alg);
        }
    }
    let criterion = verdict(laws::product_toeplitz_test(&a, &b, &c, &d));
    let oracle = is_toeplitz(&(&product(&a, &b) - &product(&c, &d)));
    Ok((json!({ "family": family, "A": a, "B": b, "C": c, "D": d }), criterion, oracle.into()))
}

fn product_equality(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (a, b, c, mut d, family) = if g.coin() {
        let (a, b) = (ctx.spec(g, &Constraint::None)?, ctx.spec(g, &Constraint::None)?);
        let t = g.nonzero_scalar();
        let (c, d) = (scale_spec(&a, &t), scale_spec(&b, &t.inv()?));
        (a, b, c, d, "scaled")
    } else {
        let (a, b, family) = toeplitz_pair(ctx, g)?;
        (a.clone(), b.clone(), b, a, family)
    };
    if !satisfy {
        // Moving D's diagonal keeps 𝐀𝐁 − 𝐂𝐃 block Toeplitz.
        let delta = g.nonzero_element(&ctx.alg);
        d = d.with_diag(d.diag() + &delta)?;
    }
    let criterion = verdict(laws::product_zero_test(&a, &b, &c, &d));
    let oracle = product(&a, &b) == product(&c, &d);
    Ok((json!({ "family": family, "A": a, "B": b, "C": c, "D": d }), criterion, oracle.into()))
}

fn pair_instance(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<(ToeplitzSpec, ToeplitzSpec, &'static str)> {
    let (mut a, mut b, family) = toeplitz_pair(ctx, g)?;
    if !satisfy {
        if g.coin() {
            a = g.perturb_spec(&a, &ctx.alg);
        } else {
            b = g.perturb_spec(&b, &ctx.alg);
        }
    }
    Ok((a, b, family))
}

fn single_product(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (a, b, family) = pair_instance(ctx, g, satisfy)?;
    let criterion = verdict(laws::single_product_toeplitz_test(&a, &b));
    let oracle = is_toeplitz(&product(&a, &b));
    Ok((json!({ "family": family, "A": a, "B": b }), criterion, oracle.into()))
}

fn reversed_product(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (a, b, family) = pair_instance(ctx, g, satisfy)?;
    let criterion = verdict(laws::single_product_toeplitz_test(&a, &b));
    let oracle = is_toeplitz(&product(&b, &a));
    Ok((json!({ "family": family, "A": a, "B": b }), criterion, oracle.into()))
}

fn products_commute(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let (a, b, family) = toeplitz_pair(ctx, g)?;
    let criterion = verdict(laws::product_commute_check(&a, &b));
    let oracle = product(&a, &b) == product(&b, &a);
    Ok((json!({ "family": family, "A": a, "B": b }), criterion, oracle.into()))
}

fn sx_displacement(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let x = g.dense(ctx.d);
    let mut m = ctx.spec(g, &Constraint::None)?.build();
    if !satisfy {
        m = g.perturb(&m, Some(&ctx.alg));
    }
    let criterion = verdict(sx_displacement_form(&m, &x).map(|f| f.is_some()));
    Ok((json!({ "matrix": m, "X": x }), criterion, is_toeplitz(&m).into()))
}

fn sx_gram(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let x = g.dense(ctx.d);
    let (lhs, rhs) = laws::shift_x_gram_sides(ctx.n, ctx.d, &x)?;
    let corner = &DenseMat::identity(ctx.d) - &(&x * &x.adjoint());
    let ok = lhs == rhs && lhs.block(0, 0) == &corner;
    Ok((json!({ "X": x }), ok.into(), true.into()))
}

fn shift_commutant(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (m, family) = if satisfy {
        let (c, family) = [
            (Constraint::LowerOnly, "lower"),
            (Constraint::UpperOnly, "upper"),
            (Constraint::DiagonalOnly, "diagonal"),
        ]
        .choose(g.rng())
        .cloned()
        .expect("nonempty");
        (ctx.spec(g, &c)?.build(), family)
    } else if g.coin() {
        (ctx.spec(g, &Constraint::None)?.build(), "general")
    } else {
        let lower = ctx.spec(g, &Constraint::LowerOnly)?.build();
        (g.perturb(&lower, Some(&ctx.alg)), "perturbed")
    };
    let c = laws::commutant_s_classify(&m);
    let criterion = Verdict::Label(c.structural.label().into());
    let oracle = Verdict::Label(c.direct.label().into());
    Ok((json!({ "family": family, "matrix": m }), criterion, oracle))
}

fn sx_commutant(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let x = if g.coin() { g.unitary(&ctx.alg) } else { g.commutant_element(&ctx.alg) };
    let (m, family) = if satisfy {
        match g.index(3) {
            0 => (ctx.spec(g, &Constraint::SxCommutant(x.clone()))?.build(), "sx"),
            1 => (ctx.spec(g, &Constraint::SxStarCommutant(x.clone()))?.build(), "sx_star"),
            _ => (ctx.spec(g, &Constraint::DiagonalOnly)?.build(), "diagonal"),
        }
    } else {
        match g.index(3) {
            0 => (ctx.spec(g, &Constraint::None)?.build(), "general"),
            1 => {
                let s = ctx.spec(g, &Constraint::SxCommutant(x.clone()))?;
                (g.perturb_spec(&s, &ctx.alg).build(), "perturbed_entry")
            }
            _ => {
                let s = ctx.spec(g, &Constraint::SxCommutant(x.clone()))?;
                (g.perturb(&s.build(), Some(&ctx.alg)), "non_toeplitz")
            }
        }
    };
    let (criterion, oracle) = match laws::commutant_sx_classify(&m, &x) {
        Ok(c) => (Verdict::Label(c.structural.label().into()), Verdict::Label(c.direct.label().into())),
        Err(e) => (Verdict::Label(format!("error: {e}")), Verdict::Label("classified".into())),
    };
    Ok((json!({ "family": family, "matrix": m, "X": x }), criterion, oracle))
}

fn sx_closure(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let x = g.unitary(&ctx.alg);
    let a = ctx.spec(g, &Constraint::SxCommutant(x.clone()))?;
    let b = ctx.spec(g, &Constraint::SxCommutant(x.clone()))?;
    let criterion = verdict(laws::sx_closure_product(&a, &b, &x));
    let oracle = is_toeplitz(&product(&a, &b));
    Ok((json!({ "A": a, "B": b, "X": x }), criterion, oracle.into()))
}

fn defect_sum_suite(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (mut m, family) = if g.rng().gen_bool(0.25) {
        let blocks: Vec<DenseMat> = (0..ctx.n).map(|_| g.element(&ctx.alg)).collect();
        let mut m = BlockMatrix::zeros(ctx.n, ctx.d);
        for (i, b) in blocks.into_iter().enumerate() {
            m.set_block(i, i, b)?;
        }
        (m, "block_diagonal")
    } else {
        let (s, family) = normal_spec(ctx, g)?;
        (s.build(), family)
    };
    if !satisfy {
        m = g.perturb(&m, Some(&ctx.alg));
    }
    let criterion = defect_sums(&m).all_zero();
    let oracle = normal_defect(&m).is_zero();
    Ok((json!({ "family": family, "matrix": m }), criterion.into(), oracle.into()))
}

fn normality(ctx: &Ctx, g: &mut Gen, satisfy: bool) -> Result<Trial> {
    let (mut spec, family) = normal_spec(ctx, g)?;
    if !satisfy {
        spec = g.perturb_spec(&spec, &ctx.alg);
    }
    let report = normality_criterion(&spec);
    let oracle = report.defect_matrix.is_zero();
    Ok((json!({ "family": family, "spec": spec }), report.is_normal.into(), oracle.into()))
}

fn circulant(ctx: &Ctx, g: &mut Gen) -> Result<Trial> {
    let x = g.unitary(&ctx.alg);
    let spec = ctx.spec(g, &Constraint::SxCommutant(x.clone()))?;
    let criterion = verdict(circulant_normality(&spec, &x, Some(&ctx.alg)));
    let oracle = normal_defect(&spec.build()).is_zero();
    Ok((json!({ "spec": spec, "X": x }), criterion, oracle.into()))
}

pub(super) fn run_trial(theorem: Theorem, trial: usize, config: &TrialConfig, g: &mut Gen) -> TrialOutcome {
    let ctx = Ctx::draw(config, g);
    let satisfy = trial.is_multiple_of(2);
    let result = match theorem {
        Theorem::DisplacementReconstruction => reconstruction(&ctx, g),
        Theorem::DisplacementForm => displacement_form_trial(&ctx, g, satisfy),
        Theorem::ProductDisplacement => product_displacement(&ctx, g),
        Theorem::DifferenceToeplitz => difference_toeplitz(&ctx, g, satisfy),
        Theorem::ProductEquality => product_equality(&ctx, g, satisfy),
        Theorem::SingleProduct => single_product(&ctx, g, satisfy),
        Theorem::ReversedProduct => reversed_product(&ctx, g, satisfy),
        Theorem::ProductsCommute => products_commute(&ctx, g),
        Theorem::SxDisplacementForm => sx_displacement(&ctx, g, satisfy),
        Theorem::SxGram => sx_gram(&ctx, g),
        Theorem::ShiftCommutant => shift_commutant(&ctx, g, satisfy),
        Theorem::SxCommutant => sx_commutant(&ctx, g, satisfy),
        Theorem::SxClosure => sx_closure(&ctx, g),
        Theorem::DefectSums => defect_sum_suite(&ctx, g, satisfy),
        Theorem::NormalityCriterion => normality(&ctx, g, satisfy),
        Theorem::CirculantNormality => circulant(&ctx, g),
    };
    let (instance, criterion, oracle) = match result {
        Ok((instance, c, o)) => (ctx.json(instance), c, o),
        Err(e) => (ctx.json(json!({})), Verdict::Label(format!("error: {e}")), Verdict::Label("instance".into())),
    };
    TrialOutcome::new(theorem, trial, instance, criterion, oracle)
}
