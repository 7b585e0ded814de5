//! Named invariant checks on an instance `(ctx, R)`, grouped into suites.
//! Each check records a pass flag and a short detail; an error while
//! computing a check counts as a failure and its message becomes the detail.

use crate::correspondence::{build_correspondence, check_generality_r, verify_correspondence, Correspondence, MarkedPoint, RulingCurve};
use crate::error::{Error, Result};
use crate::field::{proj_eq, Field, Scalar};
use crate::io::Instance;
use crate::incidence::{incidence_divisor, plucker_conic_check, support_multiplicity, theta_from_incidence};
use crate::jacobian::{Divisor, Point};
use crate::model::{extract_model, HyperellipticModel};
use crate::quadric::{binary_quadratic_roots, ContextSampling, QuadricContext};
use crate::reconstruction::{
    extract_spin_tuple, identify_frames, image_biform, plane_projection, product_embedding, roundtrip, spin_tuple_of_model,
};
use crate::symmetry::{act_on_ruling_curve, aut_group, invariant_differential_rank, quotient_invariants, spin_tuple_isomorphic, GPrime};

pub const SUITES: [&str; 5] = ["branch", "theta", "incidence", "embedding", "symmetry"];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
        self.checks.push(Check { name, pass, detail });
    }
}

fn flag(b: bool, detail: impl Into<String>) -> Result<(bool, String)> {
    Ok((b, detail.into()))
}

/// Up to `count` generic marked points of `C(R)`, in a fixed order: away from
/// the branch points, from `m`, `n`, and from the fibers over `x` and `y`.
/// Where the fiber over `s` is not split over the base field, its points are
/// taken over a quadratic extension when the backend supports one.
pub fn generic_marked_points<F: Scalar>(
    ctx: &QuadricContext<F>,
    corr: &Correspondence<F>,
    model: &HyperellipticModel<F>,
    count: usize,
) -> Vec<Point<F>> {
    let one = ctx.one();
    let (vx, vy) = (ctx.v_x.clone(), ctx.v_y());
    let mut out = Vec::new();
    for k in 1..400i64 {
        if out.len() >= count {
            break;
        }
        let s = [one.from_i64_like(k), one.clone()];
        if corr.disc.eval(&s).is_zero() {
            continue;
        }
        let Some(roots) = fiber_roots(&corr.fiber_quadratic(&s)) else { continue };
        for v in roots {
            if proj_eq(&v, &vx) || proj_eq(&v, &vy) {
                continue;
            }
            let Ok(p) = model.to_point(&MarkedPoint { s: s.clone(), v }) else { continue };
            if p != model.m && p != model.n && out.len() < count {
                out.push(p);
            }
        }
    }
    out
}

fn fiber_roots<F: Scalar>(c: &[F; 3]) -> Option<[[F; 2]; 2]> {
    if let Some(r) = binary_quadratic_roots(c) {
        return Some(r);
    }
    let disc = c[1].square() - c[0].from_i64_like(4) * &c[2] * &c[0];
    let (_, root) = disc.field().adjoin_sqrt(&disc, 1).ok()?;
    let two_a = c[2].clone() + &c[2];
    let one = c[0].one_like();
    Some([[(-c[1].clone() + &root) / &two_a, one.clone()], [(-c[1].clone() - root) / &two_a, one]])
}

struct Built<F: Scalar> {
    corr: Correspondence<F>,
    model: HyperellipticModel<F>,
}

fn build<F: Scalar>(ctx: &QuadricContext<F>, r: &RulingCurve<F>) -> Result<Built<F>> {
    let corr = build_correspondence(ctx, r)?;
    let model = extract_model(ctx, &corr)?;
    Ok(Built { corr, model })
}

/// Runs one suite by name.
pub fn run_suite<F: Scalar>(name: &str, ctx: &QuadricContext<F>, r: &RulingCurve<F>) -> Result<Suite> {
    let name = *SUITES
        .iter()
        .find(|s| **s == name)
        .ok_or_else(|| Error::Input(format!("unknown suite {name:?}")))?;
    let mut suite = Suite { name, checks: Vec::new() };
    let built = match build(ctx, r) {
        Ok(b) => b,
        Err(e) => {
            suite.push("build", Err(e));
            return Ok(suite);
        }
    };
    match name {
        "branch" => branch_suite(&mut suite, ctx, r, &built),
        "theta" => theta_suite(&mut suite, &built),
        "incidence" => incidence_suite(&mut suite, ctx, &built),
        "embedding" => embedding_suite(&mut suite, ctx, r, &built),
        _ => symmetry_suite(&mut suite, ctx, r, &built),
    }
    Ok(suite)
}

/// Runs the named suites on a stored instance. When the instance records a
/// seed, the branch suite also checks that the seed regenerates it, which
/// catches hand edits to the file.
pub fn verify_instance<K: ContextSampling>(inst: &Instance<K>, suites: &[&str]) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for name in suites {
        let mut suite = run_suite(name, &inst.ctx, &inst.r)?;
        if let (Some(seed), "branch") = (inst.seed, suite.name) {
            let outcome = Instance::sample(inst.field.clone(), inst.r.d, seed).map(|fresh| {
                let same = fresh.ctx.params() == inst.ctx.params() && fresh.r == inst.r;
                (same, format!("seed {seed}"))
            });
            let (pass, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
            suite.checks.insert(0, Check { name: "seed_reproduces_instance", pass, detail });
        }
        out.push(suite);
    }
    Ok(out)
}

fn branch_suite<F: Scalar>(s: &mut Suite, ctx: &QuadricContext<F>, r: &RulingCurve<F>, b: &Built<F>) {
    let c = &b.corr;
    let d = c.d;
    let gen = check_generality_r(ctx, r);
    s.push("generality", flag(gen.all(), gen.first_failure().unwrap_or("all conditions hold")));
    s.push("correspondence", verify_correspondence(ctx, c).map(|_| (true, "F(s, v) vanishes on every marked line".into())));
    s.push(
        "bidegree",
        {
            let forms = [&c.fa, &c.fb, &c.fc];
            let full_s = forms.iter().any(|f| f.p.deg() == d as isize) && forms.iter().any(|f| !f.eval(&[ctx.zero(), ctx.one()]).is_zero());
            let full_v = !c.fa.is_zero() || !c.fc.is_zero();
            flag(full_s && full_v, format!("({d}, 2)"))
        },
    );
    s.push(
        "branch_roots",
        flag(!c.disc.is_zero() && c.disc.n == 2 * d && c.disc.is_squarefree(), format!("{} distinct roots", 2 * d)),
    );
    s.push(
        "genus",
        flag(c.genus() == d - 1 && b.model.g() == d - 1, format!("Riemann–Hurwitz gives {}", (2 * d - 2) / 2)),
    );
    s.push(
        "partition_sizes",
        flag(
            c.pz.is_squarefree() && c.pzp.is_squarefree() && c.pz.coprime(&c.pzp) && c.pz.n == d && c.pzp.n == d,
            format!("({d}, {d})"),
        ),
    );
    s.push(
        "branch_factorization",
        flag(c.disc.proportional(&c.pz.mul(&c.pzp)), "disc_v F is proportional to P_z·P_z′"),
    );
}

fn theta_suite<F: Scalar>(s: &mut Suite, b: &Built<F>) {
    let cv = &b.model.curve;
    let theta = b.model.theta();
    s.push("theta_characteristic", flag(cv.is_theta_characteristic(&theta), "2θ ~ K"));
    s.push(
        "theta_ineffective",
        (|| {
            let div = cv.theta_divisor(&theta);
            let w = cv.class(&Divisor { pos: div.pos, neg: div.neg }).weight();
            flag(cv.is_ineffective(&theta)? && w == cv.g, format!("reduced weight {w}"))
        })(),
    );
    s.push(
        "theta_polyhedra",
        (|| {
            let mut ok = true;
            for p in [&b.model.m, &b.model.n] {
                let poly = cv.theta_polyhedron(&theta, &cv.point_div(p))?;
                ok &= poly.degree() == cv.g && cv.rr_space(&poly, 0).basis.len() == 1;
            }
            flag(ok, "|θ + m| and |θ + n| are single divisors of degree g")
        })(),
    );
}

fn incidence_suite<F: Scalar>(s: &mut Suite, ctx: &QuadricContext<F>, b: &Built<F>) {
    let (c, m) = (&b.corr, &b.model);
    let cv = &m.curve;
    let theta = m.theta();
    let pts = generic_marked_points(ctx, c, m, 5);
    s.push(
        "incidence_degree",
        (|| {
            let ix = incidence_divisor(ctx, c, m, &ctx.l_x())?;
            let iy = incidence_divisor(ctx, c, m, &ctx.l_y())?;
            flag(
                ix.degree() == 2 * c.d && iy.degree() == 2 * c.d && cv.class_of_eff(&ix) == cv.class_of_eff(&iy),
                format!("degree {} and one class", 2 * c.d),
            )
        })(),
    );
    s.push(
        "theta_from_incidence",
        (|| {
            if pts.is_empty() {
                return flag(false, "no generic marked points found");
            }
            for p in &pts {
                let dd = theta_from_incidence(ctx, c, m, p)?;
                let poly = cv.theta_polyhedron(&theta, &cv.point_div(p))?;
                let mut rel = cv.theta_divisor(&theta);
                rel.pos = cv.eff_add(&rel.pos, &cv.point_div(p));
                let zero = cv.class(&Divisor { pos: cv.eff_add(&dd, &rel.neg), neg: rel.pos });
                if dd != poly || !zero.is_identity() {
                    return flag(false, "residual divisor differs from the theta polyhedron");
                }
            }
            flag(true, format!("{} marked lines", pts.len()))
        })(),
    );
    s.push(
        "polyhedra_through_x_and_y",
        (|| {
            let fx = cv.eff_sub(&m.v_fiber(&ctx.v_x)?, &cv.point_div(&m.m));
            let fy = cv.eff_sub(&m.v_fiber(&ctx.v_y())?, &cv.point_div(&m.n));
            let (Some(fx), Some(fy)) = (fx, fy) else {
                return flag(false, "fibers over x, y miss m, n");
            };
            let pn = cv.theta_polyhedron(&theta, &cv.point_div(&m.n))?;
            let pm = cv.theta_polyhedron(&theta, &cv.point_div(&m.m))?;
            flag(fx == pn && fy == pm, "Σ[x_i, x] ∈ |θ + n| and Σ[y_i, y] ∈ |θ + m|")
        })(),
    );
    s.push(
        "support_multiplicity",
        (|| {
            let mx = support_multiplicity(ctx, c, &ctx.l_x())?;
            let my = support_multiplicity(ctx, c, &ctx.l_y())?;
            let mut others = 0;
            for p in &pts {
                others = others.max(support_multiplicity(ctx, c, &c.support(ctx, &m.to_marked(p)))?);
            }
            flag(
                mx == c.d - 1 && my == c.d - 1 && others <= 1,
                format!("l_x: {mx}, l_y: {my}, other supports at most {others}"),
            )
        })(),
    );
    s.push("plucker_conic", plucker_conic_check(ctx, c).map(|ok| (ok, "Weierstrass supports lie on conics".into())));
}

fn embedding_suite<F: Scalar>(s: &mut Suite, ctx: &QuadricContext<F>, r: &RulingCurve<F>, b: &Built<F>) {
    let d = b.corr.d;
    let t = match spin_tuple_of_model(&b.model) {
        Ok(t) => t,
        Err(e) => return s.push("spin_tuple", Err(e)),
    };
    let pe = match product_embedding(&t) {
        Ok(p) => p,
        Err(e) => return s.push("product_embedding", Err(e)),
    };
    s.push("weierstrass_fibers", flag(!proj_eq(&pe.l_value, &pe.l_prime_value), "w_i fill L and w′_i fill L′ ≠ L"));
    s.push("shared_first_coordinate", flag(proj_eq(&pe.a_m[0], &pe.phi_m[0]), "φ₁(a_m) = φ₁(m)"));
    s.push(
        "exchanger_fixed_points",
        {
            let j = &pe.exchanger;
            let [a, bb, cc, dd] = j.m.clone();
            // fixed points: cc·x² + (dd − a)·x·y − bb·y² = 0
            let fixed = binary_quadratic_roots(&[-bb, dd - &a, cc]);
            let ok = match fixed {
                Some([p, q]) => {
                    !proj_eq(&p, &q)
                        && ((proj_eq(&p, &pe.l_value) && proj_eq(&q, &pe.l_prime_value))
                            || (proj_eq(&q, &pe.l_value) && proj_eq(&p, &pe.l_prime_value)))
                }
                None => false,
            };
            flag(ok, "fixed points of j_C are π_W(L), π_W(L′)")
        },
    );
    let image = image_biform(&t, &pe);
    s.push("image_bidegree", image.as_ref().map(|g| (g.bidegree() == (d, d), format!("{:?}", g.bidegree()))).map_err(Clone::clone));
    if let Ok(g) = &image {
        let (ma, mn) = (g.multiplicity_at(&pe.a_m), g.multiplicity_at(&pe.a_n));
        s.push("singular_points", flag(ma == d - 1 && mn == d - 1, format!("a_m: {ma}, a_n: {mn}")));
        s.push(
            "plane_projection",
            plane_projection(g, &pe.a_m, &pe.a_n).map(|p| {
                (p.degree == d + 1 && p.multiplicity_at_a_n == d - 1, format!("degree {}, {}-fold point", p.degree, p.multiplicity_at_a_n))
            }),
        );
    }
    s.push("frames", identify_frames(ctx, &pe).map(|f| (true, format!("ε = {}", f.epsilon))));
    s.push(
        "roundtrip",
        roundtrip(ctx, r).map(|rep| {
            let which = if rep.equals_input { "R" } else if rep.equals_g_image { "g·R" } else { "neither" };
            (rep.success(), format!("recovered {which}"))
        }),
    );
}

fn symmetry_suite<F: Scalar>(s: &mut Suite, ctx: &QuadricContext<F>, r: &RulingCurve<F>, b: &Built<F>) {
    let aut = aut_group(ctx);
    s.push("aut_group", aut.as_ref().map(|_| (true, "congruence, Klein four, faithful on Q_H".into())).map_err(Clone::clone));
    let gr = act_on_ruling_curve(GPrime::G, r);
    if let Ok(a) = &aut {
        s.push(
            "sign_action",
            (|| {
                let mut ok = true;
                for k in 1..6i64 {
                    let sp = [ctx.one().from_i64_like(k), ctx.one()];
                    let p = a.g_matrix.mul_vec(&r.point_at(ctx, &sp));
                    let (t, s2) = ctx.segre_inverse(&p).ok_or_else(|| Error::Invariant("g leaves Q_H".into()))?;
                    ok &= (gr.form_a().eval(&s2) * &t[0] + gr.form_b().eval(&s2) * &t[1]).is_zero();
                }
                flag(ok, "g maps R onto the curve with the sign table applied")
            })(),
        );
        let swap = |m: &crate::linalg::Matrix<F>| {
            let (o, z) = (ctx.one(), ctx.zero());
            let target = [
                z.clone(), o.clone(), z.clone(), z.clone(),
                o.clone(), z.clone(), z.clone(), z.clone(),
                z.clone(), z.clone(), o.clone(), z.clone(),
                z.clone(), z.clone(), z.clone(), o,
            ];
            proj_eq(&m.to_rows().concat(), &target)
        };
        s.push("ruling_exchange", flag(swap(&a.segre[2]), "diag(1,1,−1,1,1) acts as ([t0:t1],[s0:s1]) ↦ ([s1:s0],[t1:t0])"));
    }
    s.push("invariants_on_orbit", flag(quotient_invariants(r) == quotient_invariants(&gr), "invariants of R and g·R agree"));
    s.push(
        "differential_rank",
        invariant_differential_rank(r).map(|k| (k == 2 * r.d - 1, format!("rank {k}"))),
    );
    s.push(
        "spin_tuple_isomorphic",
        (|| {
            let t = spin_tuple_of_model(&b.model)?;
            let tg = extract_spin_tuple(ctx, &gr)?;
            flag(spin_tuple_isomorphic(&t, &tg), "ν(R) ≅ ν(g·R)")
        })(),
    );
}
