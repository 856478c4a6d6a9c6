use jetforms::catalog::CatalogEntry;
use jetforms::dsl::{
    form_to_json, jet_to_json, latex_form, latex_polynomial, render_form, render_jet, Format,
};
use jetforms::jetpde::JetPolynomial;
use jetforms::msympl::MultisymplecticReport;
use jetforms::variational::{Diagnostic, Status, VariationalVerdict};
use serde_json::json;

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

fn diagnostics_text(ds: &[Diagnostic]) -> Vec<String> {
    ds.iter()
        .map(|d| {
            format!(
                "  [{}] {}: {}",
                if d.passed { "pass" } else { "FAIL" },
                d.test,
                d.detail
            )
        })
        .collect()
}

pub fn verdict(v: &VariationalVerdict, format: Format) -> String {
    if format == Format::Json {
        return pretty(&v.to_json());
    }
    let latex = format == Format::Latex;
    let form = |w| if latex { latex_form(w) } else { w.to_string() };
    let poly = |p| {
        if latex {
            latex_polynomial(p)
        } else {
            p.to_string()
        }
    };
    let mut lines = vec![
        format!("status: {}", v.status_name()),
        format!("effective: {}", form(&v.effective)),
    ];
    match &v.status {
        Status::NotVariationalFirstOrder { witness } => {
            lines.push(format!("witness: {}", form(witness)))
        }
        Status::ReconstructionFound {
            lagrangian,
            k,
            null_lagrangians,
        } => {
            lines.push(format!("k: {k}"));
            lines.push(format!("L: {}", poly(lagrangian)));
            lines.push(format!(
                "null Lagrangian directions: {}",
                null_lagrangians.len()
            ));
            lines.extend(null_lagrangians.iter().map(|l| format!("  {}", poly(l))));
        }
        Status::InconclusiveAtDegree(d) => lines.push(format!("no Lagrangian of degree <= {d}")),
    }
    lines.push("diagnostics:".into());
    lines.extend(diagnostics_text(&v.diagnostics));
    lines.join("\n")
}

pub fn report(r: &MultisymplecticReport, format: Format) -> String {
    if format == Format::Json {
        return pretty(&r.to_json());
    }
    let form = |w| {
        render_form(
            w,
            if format == Format::Latex {
                Format::Latex
            } else {
                Format::Text
            },
        )
    };
    let c1 = &r.criterion1;
    let mut lines = vec![
        format!("form: {}", form(&r.form)),
        format!("criterion 1 (contractions independent): {}", c1.independent),
    ];
    if let Some(dep) = &c1.dependency {
        lines.push(format!(
            "  dependency: [{}]",
            dep.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    lines.push(format!(
        "  rank over rational functions: {}",
        c1.function_rank
    ));
    lines.push(format!(
        "criterion 2 (d_p w = 0): {}",
        r.criterion2.vanishes
    ));
    if !r.criterion2.vanishes {
        lines.push(format!("  d_p w = {}", form(&r.criterion2.dp_omega)));
    }
    lines.push(format!("verdict: {}", r.verdict));
    if let Some(d) = &r.direct {
        let nd = &d.nondegenerate;
        lines.push(format!(
            "direct: closed {}, nondegenerate {}",
            d.closed, nd.verdict
        ));
        let how = match (nd.exact, nd.contact_frame) {
            (true, true) => "exact, in the contact coframe".to_string(),
            (true, false) => "exact".to_string(),
            (false, _) => format!("on {} sampled points", nd.samples.len()),
        };
        lines.push(format!("  nondegeneracy decided {how}"));
        if let Some(k) = &nd.kernel {
            let v: Vec<String> = k
                .vector
                .iter()
                .map(|(g, x)| format!("{x}*{}", g.direction_name()))
                .collect();
            lines.push(format!("  kernel vector: {}", v.join(" + ")));
        }
        if !d.closed {
            lines.push(format!("  dm = {}", form(&d.d_m)));
        }
    }
    if let Some(a) = r.agreement() {
        lines.push(format!("agreement: {a}"));
    }
    lines.join("\n")
}

pub fn euler_lagrange(fields: &[&str], eqs: &[JetPolynomial], format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "kind": "euler_lagrange",
            "equations": fields.iter().zip(eqs).map(|(f, e)| json!({ "field": f, "expression": jet_to_json(e) })).collect::<Vec<_>>(),
        })),
        _ => fields
            .iter()
            .zip(eqs)
            .map(|(f, e)| format!("{f}: {}", render_jet(e, format)))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

pub fn entry(e: &CatalogEntry, diagnostics: Option<&[Diagnostic]>, format: Format) -> String {
    if format == Format::Json {
        let mut v = json!({
            "name": e.name,
            "title": e.title,
            "n": e.n,
            "params": e.params,
            "lhs": jet_to_json(&e.lhs),
            "form": form_to_json(&e.form),
            "effective": form_to_json(&e.effective),
            "k": e.k.to_string(),
            "errata": e.errata,
        });
        if let Some(ds) = diagnostics {
            v["diagnostics"] = json!(ds
                .iter()
                .map(|d| json!({ "test": d.test, "passed": d.passed, "detail": d.detail }))
                .collect::<Vec<_>>());
        }
        return pretty(&v);
    }
    let mut lines = vec![
        format!("{} ({}), n = {}", e.name, e.title, e.n),
        format!("equation: {} = 0", render_jet(&e.lhs, format)),
        format!("form: {}", render_form(&e.form, format)),
        format!("effective: {}", render_form(&e.effective, format)),
        format!("k: {}", e.k),
    ];
    for note in &e.errata {
        lines.push(format!("erratum: {note}"));
    }
    if let Some(ds) = diagnostics {
        lines.push("diagnostics:".into());
        lines.extend(diagnostics_text(ds));
    }
    lines.join("\n")
}
