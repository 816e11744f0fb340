#include "mcalc/opcalc/evaluate.hpp"

#include <algorithm>
#include <numeric>

#include "mcalc/error.hpp"

namespace mcalc::opcalc {

namespace {

const PolyMap& lookup(const Bindings& b, const FuncSymbol& f) {
    const auto it = b.find(f.name);
    if (it == b.end()) throw UnboundFunction(f.name);
    return it->second;
}

std::vector<Vector> apply_factor(const std::vector<Atom>& chain, const std::vector<Vector>& slots,
                                 const Bindings& b, const Vector& x) {
    std::vector<Vector> out;
    std::size_t pos = 0;
    for (const Atom& a : chain) {
        const std::size_t n = a.inputs().size();
        if (pos + n > slots.size()) throw ArityMismatch("factor consumes more slots than it is given");
        std::vector<Vector> args(slots.begin() + static_cast<std::ptrdiff_t>(pos),
                                 slots.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
        if (a.is_id()) {
            out.insert(out.end(), args.begin(), args.end());
            continue;
        }
        const PolyMap& p = lookup(b, a.func);
        Vector at = x;
        if (a.inner) {
            const PolyMap& q = lookup(b, *a.inner);
            if (q.in_dim() != x.size()) throw ArityMismatch(a.inner->name + " does not accept the base point");
            at = q.value(x);
        }
        if (p.in_dim() != at.size()) throw ArityMismatch(a.func.name + " does not accept its argument");
        for (const auto& v : args)
            if (v.size() != p.in_dim()) throw ArityMismatch("slot dimension does not match " + a.func.name);
        out.push_back(p.derivative(at, args));
    }
    if (pos != slots.size()) throw ArityMismatch("factor leaves input slots unused");
    return out;
}

Vector kron_all(const std::vector<Vector>& parts) {
    Vector r = Vector::Ones(1);
    for (const auto& p : parts) {
        Vector next(r.size() * p.size());
        for (Eigen::Index i = 0; i < r.size(); ++i) next.segment(i * p.size(), p.size()) = r(i) * p;
        r = std::move(next);
    }
    return r;
}

}  // namespace

Vector evaluate_term(const OpTerm& t, const Bindings& b, const Vector& x, const std::vector<Vector>& dirs) {
    if (t.factors.empty()) throw ArityMismatch("term without factors");
    if (t.inputs().size() != dirs.size())
        throw ArityMismatch("term takes " + std::to_string(t.inputs().size()) + " directions, got " +
                            std::to_string(dirs.size()));
    std::vector<Vector> slots = dirs;
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) slots = apply_factor(it->chain(), slots, b, x);
    Vector r = slots.size() == 1 ? slots.front() : kron_all(slots);
    return static_cast<double>(t.coeff) * r;
}

Vector evaluate_term(const OpSum& s, const Bindings& b, const Vector& x, const std::vector<Vector>& dirs,
                     std::optional<int> out_dim) {
    if (s.terms.empty()) {
        if (!out_dim) throw ArityMismatch("the zero sum needs an output dimension");
        return Vector::Zero(*out_dim);
    }
    Vector r = evaluate_term(s.terms.front(), b, x, dirs);
    for (std::size_t i = 1; i < s.terms.size(); ++i) {
        Vector v = evaluate_term(s.terms[i], b, x, dirs);
        if (v.size() != r.size()) throw ArityMismatch("terms of a sum disagree in output dimension");
        r += v;
    }
    if (out_dim && r.size() != *out_dim) throw ArityMismatch("sum output dimension differs from the one requested");
    return r;
}

Vector evaluate_symmetrized(const OpSum& s, const Bindings& b, const Vector& x, const std::vector<Vector>& dirs,
                            std::optional<int> out_dim) {
    std::vector<std::size_t> perm(dirs.size());
    std::iota(perm.begin(), perm.end(), 0);
    Vector acc;
    double count = 0;
    do {
        std::vector<Vector> d;
        for (std::size_t i : perm) d.push_back(dirs[i]);
        Vector v = evaluate_term(s, b, x, d, out_dim);
        acc = count == 0 ? v : Vector(acc + v);
        count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc / count;
}

}  // namespace mcalc::opcalc
