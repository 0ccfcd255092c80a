//! Command dispatch and report formatting.

use std::fmt;

use latcut_core::cuts::{
    cut_for_instance, eval_gauge, finite_model, gauge_from_body, minimalize, tightness_witnesses,
    validity_oracle, CornerInstance, EquivalenceData, GaugeFunction, Minimalized, TrivialReason, Validity,
};
use latcut_core::latfree::{certify_maximal, is_lattice_free, maximalize, Defect, MaximalityCertificate, Verdict};
use latcut_core::lattice::{enumerate_points, lattice_in_subspace, BoxRegion, Mode, Region};
use latcut_core::polyhedron::HPolyhedron;
use latcut_core::{Error, QVector, Scalar};

use crate::instance::{Instance, InstanceError};
use crate::svg::{render_svg, Scene};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckFree,
    CertifyMax,
    Maximalize,
    Gauge,
    Cut,
    Minimalize,
    Model,
    Verify,
    Plot,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckFree => "check-free",
            Command::CertifyMax => "certify-max",
            Command::Maximalize => "maximalize",
            Command::Gauge => "gauge",
            Command::Cut => "cut",
            Command::Minimalize => "minimalize",
            Command::Model => "model",
            Command::Verify => "verify",
            Command::Plot => "plot",
        }
    }
}

/// Per-invocation options from the command line.
#[derive(Clone, Debug, Default)]
pub struct Options {
    /// `--box lo..hi`, once for a cube or once per coordinate.
    pub boxes: Vec<(Scalar, Scalar)>,
}

#[derive(Debug)]
pub enum CommandError {
    Instance(InstanceError),
    Core(Error),
    Missing(&'static str),
    Usage(String),
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Instance(e) => write!(f, "{e}"),
            CommandError::Core(e) => write!(f, "{e}"),
            CommandError::Missing(section) => write!(f, "the instance needs a `{section}` section for this command"),
            CommandError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CommandError {}

impl From<InstanceError> for CommandError {
    fn from(e: InstanceError) -> Self {
        CommandError::Instance(e)
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

type Outcome = std::result::Result<Report, CommandError>;

/// Human text, then `---`, then `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<String>,
    pub fields: Vec<(String, String)>,
    pub exit_code: i32,
    /// SVG text produced by `plot`.
    pub svg: Option<String>,
}

impl Report {
    fn new(command: Command) -> Self {
        let mut r = Report::default();
        r.field("command", command.name());
        r
    }

    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn field(&mut self, key: impl Into<String>, value: impl ToString) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str("---\n");
        for (k, v) in &self.fields {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

fn list(xs: &[Scalar]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }
}

struct Context<'a> {
    inst: &'a Instance,
    opts: &'a Options,
}

impl Context<'_> {
    fn body(&self) -> std::result::Result<HPolyhedron, CommandError> {
        self.inst.body()?.ok_or(CommandError::Missing("body"))
    }

    fn anchor(&self) -> std::result::Result<&QVector, CommandError> {
        self.inst.anchor.as_ref().ok_or(CommandError::Missing("f"))
    }

    /// `--box`, else the instance box, else `default`.
    fn area(&self, default: (i64, i64)) -> std::result::Result<BoxRegion, CommandError> {
        match self.inst.area() {
            Some(b) if self.opts.boxes.is_empty() => Ok(b),
            _ => self.flag_area(default),
        }
    }

    /// `--box`, else `default`; the instance box is ignored.
    fn flag_area(&self, default: (i64, i64)) -> std::result::Result<BoxRegion, CommandError> {
        let n = self.inst.dim;
        let bounds = &self.opts.boxes;
        let region = match bounds.len() {
            0 => BoxRegion::cube(n, default.0, default.1),
            1 => BoxRegion::new(QVector(vec![bounds[0].0.clone(); n]), QVector(vec![bounds[0].1.clone(); n]))?,
            k if k == n => BoxRegion::new(
                bounds.iter().map(|b| b.0.clone()).collect(),
                bounds.iter().map(|b| b.1.clone()).collect(),
            )?,
            k => {
                return Err(CommandError::Usage(format!(
                    "--box given {k} times; give it once or once per coordinate ({n})"
                )))
            }
        };
        Ok(region)
    }

    /// The gauge from the `gauge` section, or else from the body at `f`.
    fn gauge(&self) -> std::result::Result<GaugeFunction, CommandError> {
        let f = self.anchor()?.clone();
        if !self.inst.gauge.is_empty() {
            let w = self.inst.space()?.linear_part();
            return Ok(GaugeFunction::new(f, w, self.inst.gauge.clone())?);
        }
        Ok(gauge_from_body(&self.body()?, &f)?)
    }

    fn corner(&self, psi: &GaugeFunction) -> std::result::Result<CornerInstance, CommandError> {
        if self.inst.rays.is_empty() {
            return Err(CommandError::Missing("rays"));
        }
        Ok(CornerInstance::new(psi.anchor.clone(), psi.subspace.clone(), self.inst.rays.clone())?)
    }
}

pub fn run_command(command: Command, inst: &Instance, opts: &Options) -> Outcome {
    let cx = Context { inst, opts };
    match command {
        Command::CheckFree => check_free(&cx),
        Command::CertifyMax => certify(&cx),
        Command::Maximalize => run_maximalize(&cx),
        Command::Gauge => gauge(&cx),
        Command::Cut => cut(&cx),
        Command::Minimalize => run_minimalize(&cx),
        Command::Model => model(&cx),
        Command::Verify => verify(&cx),
        Command::Plot => plot(&cx),
    }
}

fn check_free(cx: &Context<'_>) -> Outcome {
    let body = cx.body()?;
    let lattice = cx.inst.lattice()?;
    let f = is_lattice_free(&body, &lattice)?;
    let mut r = Report::new(Command::CheckFree);
    r.field("lattice_free", f.lattice_free);
    match &f.witness {
        None => r.line("the body is lattice-free"),
        Some(x) => {
            r.line(format!("the body is not lattice-free: {x} lies in its interior"));
            r.field("witness", x);
            r.exit_code = 1;
        }
    }
    if let Some(rec) = &f.record {
        r.field("quotient_rank", rec.quotient.rank());
        r.field("lineality_dim", rec.lineality.len());
    }
    Ok(r)
}

fn defect_fields(r: &mut Report, d: &Defect) {
    let (name, detail) = match d {
        Defect::InteriorPoint(x) => ("interior-point", Some(("point", x.to_string()))),
        Defect::FacetWithoutWitness(h) => ("facet-without-witness", Some(("facet", h.pretty()))),
        Defect::FacetMismatch(h) => ("facet-mismatch", Some(("facet", h.pretty()))),
        Defect::LatticeSubspace(b) => (
            "lattice-subspace",
            Some(("basis", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))),
        ),
        Defect::HullInsideHyperplane => ("hull-inside-hyperplane", None),
        Defect::SeparatedFromIntegralHull => ("separated-from-integral-hull", None),
        Defect::LowDimensional => ("low-dimensional", None),
        Defect::RecessionNotLineality => ("recession-not-lineality", None),
        Defect::IrrationalLineality(_) => ("irrational-lineality", None),
    };
    r.field("defect", name);
    if let Some((k, v)) = detail {
        r.field(k, v);
    }
}

fn certificate_fields(r: &mut Report, cert: &MaximalityCertificate) {
    r.field("case", cert.case_name());
    match cert {
        MaximalityCertificate::Polyhedral(c) => {
            r.line(format!(
                "dimension {} = polytope {} + lineality {}",
                c.dim_hull, c.dim_polytope, c.dim_lineality
            ));
            for fw in &c.facets {
                r.line(format!("facet {}: witness {}", fw.inequality.pretty(), fw.witness));
            }
            r.line(format!(
                "interior search: {} lattice points",
                c.interior.interior_points.len()
            ));
            r.field("dim_hull", c.dim_hull);
            r.field("dim_polytope", c.dim_polytope);
            r.field("dim_lineality", c.dim_lineality);
            for (i, l) in c.lineality.iter().enumerate() {
                r.field(format!("lineality_{}", i + 1), l);
            }
            r.field("facets", c.facets.len());
            for (i, fw) in c.facets.iter().enumerate() {
                r.field(format!("facet_{}", i + 1), fw.inequality.pretty());
                r.field(format!("witness_{}", i + 1), &fw.witness);
            }
            r.field("interior_points", c.interior.interior_points.len());
        }
        MaximalityCertificate::Hyperplane { hyperplane, directions } => {
            r.line(format!("hyperplane {hyperplane:?}"));
            r.line("its trace on the integral hull has no lattice basis");
            for (i, d) in directions.iter().enumerate() {
                r.field(format!("direction_{}", i + 1), d);
            }
            r.field("lattice_subspace", false);
        }
        MaximalityCertificate::HalfSpace { inequality } => {
            r.line(format!("half-space {} with the integral hull on its boundary", inequality.pretty()));
            r.field("inequality", inequality.pretty());
        }
    }
}

fn certify(cx: &Context<'_>) -> Outcome {
    let body = cx.body()?;
    let lattice = cx.inst.lattice()?;
    let space = cx.inst.space()?;
    let mut r = Report::new(Command::CertifyMax);
    match certify_maximal(&body, &space, &lattice)? {
        Verdict::Maximal(cert) => {
            r.line(format!("maximal lattice-free: {} case", cert.case_name()));
            r.field("verdict", "maximal");
            certificate_fields(&mut r, &cert);
        }
        Verdict::NotMaximal(d) => {
            r.line(format!("not maximal: {d}"));
            r.field("verdict", "not-maximal");
            defect_fields(&mut r, &d);
            r.exit_code = 1;
        }
    }
    Ok(r)
}

fn body_rows(r: &mut Report, prefix: &str, b: &HPolyhedron) {
    r.field(format!("{prefix}rows"), b.inequalities.len());
    for (i, h) in b.inequalities.iter().enumerate() {
        r.line(format!("  {}", h.pretty()));
        r.field(format!("{prefix}row_{}", i + 1), h.pretty());
    }
}

fn run_maximalize(cx: &Context<'_>) -> Outcome {
    let body = cx.body()?;
    let lattice = cx.inst.lattice()?;
    let space = cx.inst.space()?;
    // The instance box is a viewing window, usually too tight for the search.
    let budget = cx.flag_area((-10, 10))?;
    let b = maximalize(&body, &space, &lattice, &budget)?;
    let mut r = Report::new(Command::Maximalize);
    r.line("maximal lattice-free body:");
    body_rows(&mut r, "", &b);
    match certify_maximal(&b, &space, &lattice)? {
        Verdict::Maximal(cert) => {
            r.line(format!("certified: {} case", cert.case_name()));
            r.field("certified", true);
            r.field("case", cert.case_name());
        }
        Verdict::NotMaximal(d) => {
            r.line(format!("certification failed: {d}"));
            r.field("certified", false);
            r.exit_code = 1;
        }
    }
    Ok(r)
}

fn gauge_fields(r: &mut Report, psi: &GaugeFunction) {
    r.field("gauge", psi);
    for (i, a) in psi.normals.iter().enumerate() {
        r.field(format!("normal_{}", i + 1), a);
    }
}

fn gauge(cx: &Context<'_>) -> Outcome {
    let psi = gauge_from_body(&cx.body()?, cx.anchor()?)?;
    let mut r = Report::new(Command::Gauge);
    r.line(format!("psi_B(r) = {psi}"));
    gauge_fields(&mut r, &psi);
    Ok(r)
}

fn validity_fields(r: &mut Report, v: &Validity, area: &BoxRegion) {
    r.field("box", format!("{}..{}", area.lower, area.upper));
    match v {
        Validity::Valid { points_checked } => {
            r.line(format!("valid at all {points_checked} integral points of the box"));
            r.field("validity", "valid-within-box");
            r.field("points_checked", points_checked);
        }
        Validity::Violated { x, s, value } => {
            let shown = value.as_ref().map_or("unbounded".to_string(), ToString::to_string);
            r.line(format!("violated at {x}: s = {s} gives {shown} < 1"));
            r.field("validity", "violated");
            r.field("point", x);
            r.field("solution", s);
            r.field("value", shown);
            r.exit_code = 1;
        }
    }
}

fn cut_lines(r: &mut Report, rays: &[QVector], coeffs: &[Scalar]) {
    for (ray, c) in rays.iter().zip(coeffs) {
        r.line(format!("{ray} : {c}"));
    }
    r.line("rhs : 1");
}

fn cut(cx: &Context<'_>) -> Outcome {
    let psi = cx.gauge()?;
    let inst = cx.corner(&psi)?;
    let coeffs = cut_for_instance(&psi, &inst)?;
    let area = cx.area((-5, 5))?;
    let mut r = Report::new(Command::Cut);
    cut_lines(&mut r, &inst.rays, &coeffs);
    r.field("gauge", &psi);
    r.field("coefficients", list(&coeffs));
    r.field("rhs", 1);
    let v = validity_oracle(&coeffs, &inst, &area)?;
    validity_fields(&mut r, &v, &area);
    Ok(r)
}

fn run_minimalize(cx: &Context<'_>) -> Outcome {
    if cx.inst.gauge.is_empty() {
        return Err(CommandError::Missing("gauge"));
    }
    let psi = cx.gauge()?;
    let alpha = cx.inst.alpha.clone().unwrap_or_else(Scalar::one);
    let lattice = cx.inst.lattice()?;
    let eq = EquivalenceData::for_anchor(&psi.anchor, &psi.subspace)?;
    let budget = cx.flag_area((-10, 10))?;
    let mut r = Report::new(Command::Minimalize);
    r.field("input", &psi);
    r.field("alpha", &alpha);
    match minimalize(&psi, &alpha, &lattice, &eq, &budget)? {
        Minimalized::Trivial(reason) => {
            let why = match reason {
                TrivialReason::MissesIntegralHull => "the interior of the body misses the integral hull",
                TrivialReason::NonpositiveRhs => "the right-hand side is not positive after the shift",
            };
            r.line(format!("trivial: {why}"));
            r.field("verdict", "trivial");
            r.exit_code = 1;
        }
        Minimalized::Minimal(m) => {
            r.line(format!("minimal inequality: psi_B(r) = {}", m.gauge));
            r.line("body B:");
            r.field("verdict", "minimal");
            gauge_fields(&mut r, &m.gauge);
            body_rows(&mut r, "body_", &m.body);
            r.line(format!("shift lambda = {}, rho = {}", list(&m.shift.lambda), m.rho));
            r.line(format!(
                "shift check: min {{z + lambda^T C r : z >= a_i r, G r = 0}} = {}",
                m.shift.check_value
            ));
            r.line(format!("normalized input: {}", m.normalized));
            r.field("lambda", list(&m.shift.lambda));
            r.field("rho", &m.rho);
            r.field("shift_check", &m.shift.check_value);
            r.field("normalized", &m.normalized);
            for (i, c) in eq.c.iter().enumerate() {
                r.field(format!("c_{}", i + 1), c);
            }
            r.field("d", list(&eq.d));
            r.field("equivalence_rho", &m.equivalence.rho);
            r.field("equivalence_lambda", list(&m.equivalence.lambda));
            r.field("dominated_first", m.dominated_first);
            r.line(format!("maximality: {} case", m.certificate.case_name()));
            r.field("certificate", m.certificate.case_name());
            if !cx.inst.rays.is_empty() {
                let inst = cx.corner(&m.gauge)?;
                let coeffs = cut_for_instance(&m.gauge, &inst)?;
                cut_lines(&mut r, &inst.rays, &coeffs);
                r.field("coefficients", list(&coeffs));
            }
        }
    }
    Ok(r)
}

fn model(cx: &Context<'_>) -> Outcome {
    let body = cx.body()?;
    let f = cx.anchor()?;
    let lattice = cx.inst.lattice()?;
    let m = finite_model(&body, f, &lattice)?;
    let mut r = Report::new(Command::Model);
    r.line(format!("finite model with {} vertex rays and {} lineality rays", m.k(), m.h()));
    for (i, ray) in m.vertex_rays.iter().enumerate() {
        r.line(format!("  r{} = {ray}", i + 1));
        r.field(format!("vertex_ray_{}", i + 1), ray);
    }
    for (i, ray) in m.lineality_rays.iter().enumerate() {
        r.line(format!("  r{} = {ray} (lineality)", m.k() + i + 1));
        r.field(format!("lineality_ray_{}", i + 1), ray);
    }
    let terms: Vec<String> = (1..=m.k()).map(|j| format!("s{j}")).collect();
    let cut = format!("{} >= 1", terms.join(" + "));
    r.line(format!("finite cut: {cut}"));
    r.field("k", m.k());
    r.field("h", m.h());
    r.field("scale", &m.scale);
    r.field("cut", cut);
    let area = cx.area((-3, 3))?;
    let t = tightness_witnesses(&m.cut(), &m.instance()?, &area)?;
    r.line(format!(
        "{} affinely independent tight points in the box (evidence, not a proof of extremality)",
        t.count
    ));
    r.field("tight_points", t.count);
    for (i, (s, x)) in t.points.iter().zip(&t.targets).enumerate() {
        r.field(format!("tight_{}", i + 1), format!("{x} via {s}"));
    }
    if t.count == m.k() + m.h() {
        r.field("evidence", "facet-level");
    }
    Ok(r)
}

fn verify(cx: &Context<'_>) -> Outcome {
    let psi = cx.gauge()?;
    let area = cx.area((-5, 5))?;
    let mut r = Report::new(Command::Verify);
    r.field("gauge", &psi);
    // Every integral point x of f + W must satisfy psi(x - f) >= 1.
    let space = psi.affine_space();
    let mut checked = 0usize;
    let mut bad = None;
    if let Some(lw) = lattice_in_subspace(&cx.inst.lattice()?, &space)? {
        for x in enumerate_points(&lw, Region::Box(&area), Mode::Closed)? {
            checked += 1;
            if eval_gauge(&psi, &x.sub(&psi.anchor)) < Scalar::one() && bad.is_none() {
                bad = Some(x);
            }
        }
    }
    r.field("gauge_points_checked", checked);
    match &bad {
        None => {
            r.line(format!("psi(x - f) >= 1 at all {checked} lattice points of the box"));
            r.field("gauge_validity", "valid-within-box");
        }
        Some(x) => {
            r.line(format!("psi(x - f) < 1 at {x}"));
            r.field("gauge_validity", "violated");
            r.field("gauge_point", x);
            r.exit_code = 1;
        }
    }
    if !cx.inst.rays.is_empty() {
        let inst = cx.corner(&psi)?;
        let coeffs = cut_for_instance(&psi, &inst)?;
        cut_lines(&mut r, &inst.rays, &coeffs);
        let v = validity_oracle(&coeffs, &inst, &area)?;
        validity_fields(&mut r, &v, &area);
    }
    Ok(r)
}

fn plot(cx: &Context<'_>) -> Outcome {
    let body = cx.inst.body()?;
    let lattice = cx.inst.lattice()?;
    let viewport = cx.area((-2, 3))?;
    let scene = Scene {
        bodies: body.iter().collect(),
        lattice: &lattice,
        anchor: cx.inst.anchor.as_ref(),
        rays: &cx.inst.rays,
        viewport: &viewport,
    };
    let svg = render_svg(&scene)?;
    let mut r = Report::new(Command::Plot);
    r.line(format!("rendered {} bytes of SVG", svg.len()));
    r.field("bytes", svg.len());
    r.svg = Some(svg);
    Ok(r)
}
