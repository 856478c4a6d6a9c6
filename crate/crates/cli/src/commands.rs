use jetforms::catalog::{catalog, entries};
use jetforms::dsl::{render_form, render_jet, Format};
use jetforms::euler::{euler, euler_first_order, FirstOrderLagrangian};
use jetforms::jetpde::{euler_lagrange_fields, extract_pde, synthesize_form};
use jetforms::msympl::check_multisymplectic;
use jetforms::variational::reconstruct;
use jetforms::{Error, Result};
use serde_json::json;

use crate::input::{classify, workspace};
use crate::output;
use crate::{CatalogAction, Cli, Command};

pub fn run(cli: &Cli, format: Format) -> Result<String> {
    let one = |raw: &str| -> Result<(crate::input::Arg, jetforms::dsl::Workspace)> {
        let arg = classify(raw)?;
        let ws = workspace(cli.n, &cli.params, &[&arg])?;
        Ok((arg, ws))
    };
    match &cli.command {
        Command::Effective { form } => {
            let (arg, ws) = one(form)?;
            let ctx = ws.context();
            let w = arg.form(&ws)?;
            let eff = ctx.effective_part(&ctx.project(&w)?)?;
            Ok(render_form(&eff, format))
        }
        Command::Euler { input } => {
            let (arg, ws) = one(input)?;
            let ctx = ws.context();
            let w = arg.form(&ws)?;
            let out = match w.as_scalar().filter(|_| w.degree() == 0) {
                Some(l) => {
                    let lag = FirstOrderLagrangian::new(ctx, l)?;
                    let closed = euler_first_order(ctx, &lag);
                    if closed != euler(ctx, &lag.form(ctx))? {
                        return Err(Error::Invariant(
                            "closed Euler formula disagrees with the definition".into(),
                        ));
                    }
                    closed
                }
                None => euler(ctx, &w)?,
            };
            Ok(render_form(&out, format))
        }
        Command::Extract { form } => {
            let (arg, ws) = one(form)?;
            let w = arg.form(&ws)?;
            Ok(render_jet(&extract_pde(ws.context(), &w)?, format))
        }
        Command::Represent { pde, degree } => {
            let (arg, ws) = one(pde)?;
            let lhs = arg.jet(&ws)?;
            Ok(render_form(
                &synthesize_form(ws.context(), &lhs, *degree)?,
                format,
            ))
        }
        Command::CheckVariational { form, degree } => {
            let (arg, ws) = one(form)?;
            let w = arg.form(&ws)?;
            Ok(output::verdict(
                &reconstruct(ws.context(), &w, *degree)?,
                format,
            ))
        }
        Command::CheckMultisymplectic { form, samples } => {
            let (arg, ws) = one(form)?;
            let w = arg.form(&ws)?;
            Ok(output::report(
                &check_multisymplectic(ws.context(), &w, *samples, cli.seed)?,
                format,
            ))
        }
        Command::El { fields, lagrangian } => {
            let (arg, ws) = one(lagrangian)?;
            let l = arg.jet(&ws)?;
            let names: Vec<&str> = fields.iter().map(String::as_str).collect();
            let eqs = euler_lagrange_fields(&l, &names)?;
            Ok(output::euler_lagrange(&names, &eqs, format))
        }
        Command::Catalog {
            action: CatalogAction::List,
        } => {
            let all = entries()?;
            Ok(match format {
                Format::Json => serde_json::to_string_pretty(&json!(all
                    .iter()
                    .map(|e| json!({ "name": e.name, "title": e.title, "n": e.n }))
                    .collect::<Vec<_>>()))
                .expect("json"),
                _ => all
                    .iter()
                    .map(|e| format!("{:<14} n={}  {}", e.name, e.n, e.title))
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
        }
        Command::Catalog {
            action: CatalogAction::Show { name, validate },
        } => {
            let e = catalog(name)?;
            let diagnostics = if *validate { Some(e.validate()?) } else { None };
            Ok(output::entry(e, diagnostics.as_deref(), format))
        }
    }
}
