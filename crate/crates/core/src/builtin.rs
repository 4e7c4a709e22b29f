//! The six built-in presentations and the four built-in scaling maps,
//! written in the presentation file format.

use crate::error::{Error, Result};
use crate::presentation::{load_presentation_with, Presentation, ScalingSpec};

pub const BUILTIN_NAMES: [&str; 6] = ["fun-slh2", "uh-sl2", "fun-ph11", "uh-p11", "heis3", "osc4"];

const FUN_SLH2: &str = "\
# functions on the Jordanian group SL_h(2), T = [[a, b], [c, d]]
algebra fun-slh2
params h
gens a < b < c < d
rel [c,a] = h*c^2
rel [b,a] = h - h*a^2
rel [a,d] = h*a*c - h*d*c
rel [c,d] = h*c^2
rel [b,d] = h - h*d^2
rel [c,b] = h*a*c + h*c*d
# quantum determinant a*d - b*c - h*a*c = 1
extra b*c = a*d - 1 - h*a*c
coproduct a = a@a + b@c
coproduct b = a@b + b@d
coproduct c = c@a + d@c
coproduct d = c@b + d@d
counit a = 1
counit b = 0
counit c = 0
counit d = 1
antipode a = d - h*c
antipode b = -b + h*a - h*d + h^2*c
antipode c = -c
antipode d = a + h*c
";

const UH_SL2: &str = "\
algebra uh-sl2
params h
gens J+ < J3 < J-
alias Jp = J+
alias Jm = J-
rel [J3,J+] = 2*divh(sinh(h*J+), 1)
rel [J3,J-] = -(J-*cosh(h*J+) + cosh(h*J+)*J-)
rel [J+,J-] = J3
coproduct J+ = J+@1 + 1@J+
coproduct J- = J-@exp(h*J+) + exp(-h*J+)@J-
coproduct J3 = J3@exp(h*J+) + exp(-h*J+)@J3
counit J+ = 0
counit J- = 0
counit J3 = 0
antipode J+ = -J+
antipode J- = -exp(h*J+)*J-*exp(-h*J+)
antipode J3 = -exp(h*J+)*J3*exp(-h*J+)
";

const FUN_PH11: &str = "\
# functions on the Jordanian Poincare group P_h(1+1)
algebra fun-ph11
params h
# delta sits next to alpha so the determinant rules act on adjacent letters
gens alpha < delta < beta < gamma
rel [gamma,alpha] = 0
rel [beta,alpha] = h - h*alpha^2
rel [alpha,delta] = 0
rel [beta,delta] = h - h*delta^2
rel [gamma,delta] = 0
rel [gamma,beta] = h*alpha*gamma + h*gamma*delta
# determinant alpha*delta = 1
extra alpha*delta = 1
coproduct alpha = alpha@alpha
coproduct beta = alpha@beta + beta@delta
coproduct gamma = gamma@alpha + delta@gamma
coproduct delta = delta@delta
counit alpha = 1
counit beta = 0
counit gamma = 0
counit delta = 1
antipode alpha = delta
antipode beta = -beta + h*alpha - h*delta
antipode gamma = -gamma
antipode delta = alpha
";

const UH_P11: &str = "\
algebra uh-p11
params h
gens P+ < K < P-
alias Pp = P+
alias Pm = P-
rel [K,P+] = divh(sinh(h*P+), 1)
rel [K,P-] = -P-*cosh(h*P+)
rel [P+,P-] = 0
coproduct P+ = P+@1 + 1@P+
coproduct P- = P-@exp(h*P+) + exp(-h*P+)@P-
coproduct K = K@exp(h*P+) + exp(-h*P+)@K
counit P+ = 0
counit P- = 0
counit K = 0
antipode P+ = -P+
antipode P- = -P-
antipode K = -K + sinh(h*P+)
note coproduct P- : first term transcribed as P-@exp(h*P+); the J-@exp(h*P+) form of the source formula is not an element of this algebra, and contracting uh-sl2 yields the P- form
";

const HEIS3: &str = "\
algebra heis3
params h
gens A < H < A+
alias Ad = A+
alias A_+ = A+
rel [H,A] = 0
rel [H,A+] = 0
rel [A,A+] = H
coproduct A = A@1 + 1@A
coproduct A+ = A+@exp(h*A) + exp(-h*A)@A+
coproduct H = H@exp(h*A) + exp(-h*A)@H
counit A = 0
counit A+ = 0
counit H = 0
antipode A = -A
antipode A+ = -exp(h*A)*A+*exp(-h*A)
antipode H = -H
central H
";

const OSC4: &str = "\
# carries Hopf data on purpose; it does not satisfy the Hopf axioms
algebra osc4
params h
gens A < N < H < A+
alias Ad = A+
alias A_+ = A+
rel [A,A+] = H
rel [N,A] = -divh(sinh(h*A), 1)
rel [N,A+] = (1/2)*(A+*cosh(h*A) + cosh(h*A)*A+)
rel [H,A] = 0
rel [H,N] = 0
rel [H,A+] = 0
coproduct A = A@1 + 1@A
coproduct A+ = A+@exp(h*A) + exp(-h*A)@A+
coproduct H = H@exp(h*A) + exp(-h*A)@H
coproduct N = N@exp(h*A) + exp(-h*A)@N
counit A = 0
counit A+ = 0
counit H = 0
counit N = 0
antipode A = -A
antipode A+ = -exp(h*A)*A+*exp(-h*A)
antipode H = -H
antipode N = -exp(h*A)*N*exp(-h*A)
central H
";

const SCALINGS: &str = "\
scaling poincare
  source fun-slh2
  target fun-ph11
  map alpha = a
  map beta = b
  map gamma = e^-1*c
  map delta = d
end
scaling poincare
  source uh-sl2
  target uh-p11
  map P+ = J+
  map P- = e*J-
  map K = (1/2)*J3
  renorm casimir 1
end
scaling heisenberg
  source uh-sl2
  target heis3
  map A = J+
  map A+ = e*J-
  map H = e*J3
end
scaling oscillator
  source uh-sl2
  target osc4
  extend K
  coproduct K = K@exp(h*J+) + exp(-h*J+)@K
  counit K = 0
  antipode K = -K
  map A = J+
  map A+ = e*J-
  map N = -(1/2)*J3 + (1/2)*e^-1*K
  map H = K
end
";

/// Source text of a built-in presentation.
pub fn builtin_source(name: &str) -> Result<&'static str> {
    Ok(match name {
        "fun-slh2" => FUN_SLH2,
        "uh-sl2" => UH_SL2,
        "fun-ph11" => FUN_PH11,
        "uh-p11" => UH_P11,
        "heis3" => HEIS3,
        "osc4" => OSC4,
        other => return Err(Error::UnknownName(format!("presentation {other}"))),
    })
}

pub fn builtin(name: &str) -> Result<Presentation> {
    let src = builtin_source(name)?;
    load_presentation_with(src, &|_| None)
}

/// All built-in scaling maps, in definition order.
pub fn builtin_scalings() -> Vec<ScalingSpec> {
    load_presentation_with(SCALINGS, &|name| builtin(name).ok())
        .expect("built-in scalings parse")
        .scalings
}

/// Looks up a built-in scaling by name; names shared by several maps are
/// disambiguated by the source presentation.
pub fn builtin_scaling(name: &str, source: Option<&str>) -> Result<ScalingSpec> {
    let mut found: Vec<ScalingSpec> = builtin_scalings()
        .into_iter()
        .filter(|s| s.name == name && source.is_none_or(|src| s.source == src))
        .collect();
    match found.len() {
        0 => Err(Error::UnknownName(format!("scaling {name}"))),
        1 => Ok(found.remove(0)),
        _ => Err(Error::UnknownName(format!(
            "scaling {name} is ambiguous; name its source presentation"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{load_presentation, save_presentation};

    #[test]
    fn all_builtins_load_and_round_trip() {
        for name in BUILTIN_NAMES {
            let p = builtin(name).unwrap();
            assert_eq!(p.name, name);
            assert!(p.has_hopf());
            let text = save_presentation(&p);
            assert_eq!(load_presentation(&text).unwrap(), p, "{name}");
        }
        assert!(matches!(builtin("sl3"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn builtin_contents() {
        let sl2 = builtin("uh-sl2").unwrap();
        let r = sl2.relation("J-", "J3").unwrap();
        assert_eq!(r.rhs.to_string(), "J-*cosh(h*J+) + cosh(h*J+)*J-");
        assert_eq!(sl2.relation("J-", "J+").unwrap().rhs.to_string(), "-J3");
        let ph = builtin("fun-ph11").unwrap();
        assert_eq!(
            ph.hopf.unwrap().coproduct["gamma"].to_string(),
            "gamma@alpha + delta@gamma"
        );
        assert_eq!(builtin("heis3").unwrap().central, vec!["H".to_string()]);
    }

    #[test]
    fn scalings_resolve() {
        assert_eq!(builtin_scalings().len(), 4);
        assert_eq!(
            builtin_scaling("poincare", Some("uh-sl2")).unwrap().target,
            "uh-p11"
        );
        assert_eq!(
            builtin_scaling("poincare", Some("fun-slh2"))
                .unwrap()
                .target,
            "fun-ph11"
        );
        assert!(builtin_scaling("poincare", None).is_err());
        assert_eq!(builtin_scaling("heisenberg", None).unwrap().target, "heis3");
    }
}
