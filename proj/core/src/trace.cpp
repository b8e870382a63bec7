#include "mcmin/trace.hpp"

namespace mcmin {

EpsQuotientCertificate step_certificate(const MinimisationTrace& trace, std::size_t i) {
    if (i >= trace.steps.size()) throw ValidationError("trace step index out of range");
    const LabelledMarkovChain& source = i == 0 ? trace.input : trace.steps[i - 1].quotient;
    const TraceStep& step = trace.steps[i];
    const double epsilon = i == 0 ? 0.0 : step.witness.budget;
    return EpsQuotientCertificate{source, step.quotient, step.mapping, step.witness, epsilon};
}

EpsQuotientCertificate compose_trace(const MinimisationTrace& trace, double tol_exact) {
    EpsQuotientCertificate cert = step_certificate(trace, 0);
    for (std::size_t i = 1; i < trace.steps.size(); ++i) {
        cert = compose_witnesses(cert, step_certificate(trace, i), tol_exact);
    }
    return cert;
}

} // namespace mcmin
