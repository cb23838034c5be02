#include "ctb/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <random>

namespace ctb
{

namespace
{

using cd = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

Mat2c mat(cd a, cd b, cd c, cd d)
{
    Mat2c m;
    m << a, b, c, d;
    return m;
}

Mat2c clifford_matrix(CliffordKind k)
{
    const double r = 1 / std::sqrt(2.0);
    const cd i(0, 1);
    switch (k)
    {
    case CliffordKind::H:
        return mat(r, r, r, -r);
    case CliffordKind::S:
        return mat(1, 0, 0, i);
    case CliffordKind::Sdg:
        return mat(1, 0, 0, -i);
    case CliffordKind::X:
        return mat(0, 1, 1, 0);
    case CliffordKind::Y:
        return mat(0, -i, i, 0);
    case CliffordKind::Z:
        return mat(1, 0, 0, -1);
    case CliffordKind::CNOT:
        break;
    }
    throw std::logic_error("CNOT has no single-qubit matrix");
}

Mat2c rz_matrix(double theta)
{
    return mat(std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2));
}

std::uint64_t qubit_bit(int n, int q)
{
    return std::uint64_t(1) << (n - 1 - q);
}

// Apply M to qubit q of a 2^n vector laid out with the given stride.
void apply_1q(cd* data, std::ptrdiff_t stride, int n, int q, const Mat2c& M)
{
    const std::uint64_t bit = qubit_bit(n, q), dim = std::uint64_t(1) << n;
    for (std::uint64_t x = 0; x < dim; ++x)
    {
        if (x & bit)
            continue;
        cd& a = data[x * stride];
        cd& b = data[(x | bit) * stride];
        const cd a0 = a, b0 = b;
        a = M(0, 0) * a0 + M(0, 1) * b0;
        b = M(1, 0) * a0 + M(1, 1) * b0;
    }
}

void apply_cnot(cd* data, std::ptrdiff_t stride, int n, int control, int target)
{
    const std::uint64_t cb = qubit_bit(n, control), tb = qubit_bit(n, target), dim = std::uint64_t(1) << n;
    for (std::uint64_t x = 0; x < dim; ++x)
        if ((x & cb) && !(x & tb))
            std::swap(data[x * stride], data[(x | tb) * stride]);
}

struct Unitary1q
{
    int qubit;
    Mat2c m;
};

struct Cnot
{
    int control, target;
};

// Unitary content of an event, or nothing for Depolarize.
std::variant<std::monostate, Unitary1q, Cnot> unitary_of(const Event& e)
{
    if (const auto* g = std::get_if<CliffordGate>(&e))
    {
        if (g->kind == CliffordKind::CNOT)
            return Cnot{g->qubit, g->target};
        return Unitary1q{g->qubit, clifford_matrix(g->kind)};
    }
    if (const auto* g = std::get_if<RzGate>(&e))
        return Unitary1q{g->qubit, rz_matrix(g->angle)};
    if (const auto* g = std::get_if<GateStringGate>(&e))
        return Unitary1q{g->qubit, g->matrix};
    return std::monostate{};
}

int event_qubit(const Event& e)
{
    return std::visit([](const auto& g) { return g.qubit; }, e);
}

// P|x⟩ = base·(-1)^{popcount(x & sign)}·|x ^ flip⟩
struct PauliAction
{
    std::uint64_t flip, sign;
    cd base;

    explicit PauliAction(const PauliString& p) : flip(p.flip_mask()), sign(p.sign_mask())
    {
        static const cd ipow[4] = {1, cd(0, 1), -1, cd(0, -1)};
        base = ipow[p.y_count() % 4];
    }
    cd phase(std::uint64_t x) const { return (std::popcount(x & sign) & 1) ? -base : base; }
};

} // namespace

PauliString::PauliString(std::string label) : label_(std::move(label))
{
    if (label_.size() > 63)
        throw std::invalid_argument("Pauli strings are limited to 63 qubits");
    for (char c : label_)
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw std::invalid_argument("Pauli label may only contain I, X, Y, Z: " + label_);
}

bool PauliString::is_identity() const
{
    return std::all_of(label_.begin(), label_.end(), [](char c) { return c == 'I'; });
}

std::uint64_t PauliString::flip_mask() const
{
    std::uint64_t m = 0;
    for (int q = 0; q < n_qubits(); ++q)
        if (label_[q] == 'X' || label_[q] == 'Y')
            m |= qubit_bit(n_qubits(), q);
    return m;
}

std::uint64_t PauliString::sign_mask() const
{
    std::uint64_t m = 0;
    for (int q = 0; q < n_qubits(); ++q)
        if (label_[q] == 'Z' || label_[q] == 'Y')
            m |= qubit_bit(n_qubits(), q);
    return m;
}

int PauliString::y_count() const
{
    return static_cast<int>(std::count(label_.begin(), label_.end(), 'Y'));
}

double Hamiltonian::h_norm_bound() const
{
    double s = 0;
    for (const auto& [p, c] : terms)
        s += std::abs(c);
    return s;
}

GateStringGate::GateStringGate(int q, GateString g) : qubit(q), gates(std::move(g))
{
    const Mat2 m = gate_string_to_matrix(gates);
    for (int i = 0; i < 4; ++i)
    {
        const auto [re, im] = m[i].value_high();
        matrix(i / 2, i % 2) = cd(static_cast<double>(re), static_cast<double>(im));
    }
}

void Circuit::add(Event e)
{
    auto check = [&](int q) {
        if (q < 0 || q >= n_qubits_)
            throw std::out_of_range("qubit index out of range");
    };
    check(event_qubit(e));
    if (const auto* g = std::get_if<CliffordGate>(&e); g && g->kind == CliffordKind::CNOT)
    {
        check(g->target);
        if (g->target == g->qubit)
            throw std::invalid_argument("CNOT control equals target");
    }
    if (const auto* d = std::get_if<DepolarizeEvent>(&e); d && !(d->p >= 0 && d->p <= 1))
        throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
    events_.push_back(std::move(e));
}

void Circuit::append(const Circuit& other)
{
    if (other.n_qubits_ != n_qubits_)
        throw DimensionMismatch("circuits act on different qubit counts");
    events_.insert(events_.end(), other.events_.begin(), other.events_.end());
}

std::size_t Circuit::rz_count() const
{
    return std::count_if(events_.begin(), events_.end(), [](const Event& e) { return std::holds_alternative<RzGate>(e); });
}

std::size_t Circuit::t_count() const
{
    std::size_t n = 0;
    for (const auto& e : events_)
        if (const auto* g = std::get_if<GateStringGate>(&e))
            n += ctb::t_count(g->gates);
    return n;
}

Circuit compile_pauli_rotation(const PauliString& p, double angle)
{
    if (p.is_identity())
        throw IdentityPauli("cannot compile a rotation about the identity");
    const int n = p.n_qubits();
    Circuit c(n);
    std::vector<int> active;
    for (int q = 0; q < n; ++q)
        if (p.at(q) != 'I')
            active.push_back(q);

    // X = H Z H, Y = (SH) Z (SH)†
    for (int q : active)
    {
        if (p.at(q) == 'X')
            c.add(CliffordGate{CliffordKind::H, q});
        else if (p.at(q) == 'Y')
        {
            c.add(CliffordGate{CliffordKind::Sdg, q});
            c.add(CliffordGate{CliffordKind::H, q});
        }
    }
    for (std::size_t i = 0; i + 1 < active.size(); ++i)
        c.add(CliffordGate{CliffordKind::CNOT, active[i], active[i + 1]});
    // exp(iaZ) = Rz(-2a)
    c.add(RzGate{active.back(), -2 * angle});
    for (std::size_t i = active.size() - 1; i-- > 0;)
        c.add(CliffordGate{CliffordKind::CNOT, active[i], active[i + 1]});
    for (int q : active)
    {
        if (p.at(q) == 'X')
            c.add(CliffordGate{CliffordKind::H, q});
        else if (p.at(q) == 'Y')
        {
            c.add(CliffordGate{CliffordKind::H, q});
            c.add(CliffordGate{CliffordKind::S, q});
        }
    }
    return c;
}

Circuit build_trotter_ucc(const std::vector<PauliRotation>& generators, int n_qubits)
{
    Circuit c(n_qubits);
    for (const auto& g : generators)
    {
        if (g.pauli.n_qubits() != n_qubits)
            throw DimensionMismatch("generator " + g.pauli.label() + " does not match the qubit count");
        c.append(compile_pauli_rotation(g.pauli, g.angle));
    }
    return c;
}

ApproximationReport approximate_circuit(const Circuit& c, SynthCache& cache)
{
    ApproximationReport rep;
    rep.circuit = Circuit(c.n_qubits());
    std::map<double, GateStringGate> compiled;
    double eps_sum = 0;
    std::size_t rz = 0;
    for (const auto& e : c.events())
    {
        if (std::holds_alternative<DepolarizeEvent>(e) || std::holds_alternative<GateStringGate>(e))
            throw std::invalid_argument("approximate_circuit expects Clifford and Rz events only");
        const auto* g = std::get_if<RzGate>(&e);
        if (!g)
        {
            rep.circuit.add(e);
            continue;
        }
        const SynthesisResult& r = cache.get(g->angle);
        auto it = compiled.find(g->angle);
        if (it == compiled.end())
            it = compiled.emplace(g->angle, GateStringGate(0, r.gates)).first;
        GateStringGate gate = it->second;
        gate.qubit = g->qubit;
        rep.circuit.add(std::move(gate));
        rep.total_t_count += r.t_count;
        rep.eps_max = std::max(rep.eps_max, r.eps);
        eps_sum += r.eps;
        ++rz;
    }
    rep.eps_mean = rz ? eps_sum / double(rz) : 0;
    rep.distinct_angles = compiled.size();
    return rep;
}

ApproximationReport approximate_circuit(const Circuit& c, int n_t, std::uint64_t seed)
{
    SynthCache cache(n_t, seed);
    return approximate_circuit(c, cache);
}

Circuit depolarized_model_circuit(const Circuit& c, double p)
{
    Circuit out(c.n_qubits());
    for (const auto& e : c.events())
    {
        out.add(e);
        if (const auto* g = std::get_if<RzGate>(&e))
            out.add(DepolarizeEvent{g->qubit, p});
    }
    return out;
}

StateVector basis_state(int n_qubits, std::uint64_t index)
{
    StateVector v = StateVector::Zero(Eigen::Index(1) << n_qubits);
    v(Eigen::Index(index)) = 1;
    return v;
}

DensityMatrix pure_density(const StateVector& psi)
{
    return psi * psi.adjoint();
}

StateVector run_statevector(const Circuit& c, const StateVector& initial, int max_qubits)
{
    const int n = c.n_qubits();
    if (n > max_qubits)
        throw TooManyQubits("statevector simulation limited to " + std::to_string(max_qubits) + " qubits");
    if (initial.size() != (Eigen::Index(1) << n))
        throw DimensionMismatch("initial state has the wrong dimension");
    StateVector v = initial;
    for (const auto& e : c.events())
    {
        const auto u = unitary_of(e);
        if (const auto* g = std::get_if<Unitary1q>(&u))
            apply_1q(v.data(), 1, n, g->qubit, g->m);
        else if (const auto* x = std::get_if<Cnot>(&u))
            apply_cnot(v.data(), 1, n, x->control, x->target);
        else
            throw NonUnitaryEvent("statevector simulation cannot apply a depolarizing event");
    }
    return v;
}

DensityMatrix run_density(const Circuit& c, const DensityMatrix& initial, int max_qubits)
{
    const int n = c.n_qubits();
    if (n > max_qubits)
        throw TooManyQubits("density-matrix simulation limited to " + std::to_string(max_qubits) + " qubits");
    const Eigen::Index dim = Eigen::Index(1) << n;
    if (initial.rows() != dim || initial.cols() != dim)
        throw DimensionMismatch("initial density matrix has the wrong dimension");
    DensityMatrix rho = initial;
    for (const auto& e : c.events())
    {
        const auto u = unitary_of(e);
        if (const auto* g = std::get_if<Unitary1q>(&u))
        {
            // ρ → Uρ on columns, then ρU† on rows
            for (Eigen::Index j = 0; j < dim; ++j)
                apply_1q(rho.col(j).data(), 1, n, g->qubit, g->m);
            const Mat2c mc = g->m.conjugate();
            for (Eigen::Index i = 0; i < dim; ++i)
                apply_1q(rho.data() + i, dim, n, g->qubit, mc);
        }
        else if (const auto* x = std::get_if<Cnot>(&u))
        {
            for (Eigen::Index j = 0; j < dim; ++j)
                apply_cnot(rho.col(j).data(), 1, n, x->control, x->target);
            for (Eigen::Index i = 0; i < dim; ++i)
                apply_cnot(rho.data() + i, dim, n, x->control, x->target);
        }
        else
        {
            // (1-p)ρ + p·(I/2 ⊗ tr_q ρ)
            const auto& d = std::get<DepolarizeEvent>(e);
            const std::uint64_t bit = qubit_bit(n, d.qubit);
            DensityMatrix out(dim, dim);
            for (Eigen::Index j = 0; j < dim; ++j)
                for (Eigen::Index i = 0; i < dim; ++i)
                {
                    const bool same = ((i ^ j) & bit) == 0;
                    out(i, j) = same ? (1 - d.p / 2) * rho(i, j) + (d.p / 2) * rho(i ^ bit, j ^ bit)
                                     : (1 - d.p) * rho(i, j);
                }
            rho = std::move(out);
        }
    }
    return rho;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c)
{
    const Eigen::Index dim = Eigen::Index(1) << c.n_qubits();
    Eigen::MatrixXcd U(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        U.col(j) = run_statevector(c, basis_state(c.n_qubits(), j));
    return U;
}

StateVector apply_pauli(const PauliString& p, const StateVector& psi)
{
    const int n = p.n_qubits();
    if (psi.size() != (Eigen::Index(1) << n))
        throw DimensionMismatch("Pauli string and state disagree on qubit count");
    const PauliAction a(p);
    StateVector out(psi.size());
    for (std::uint64_t x = 0; x < std::uint64_t(psi.size()); ++x)
        out(Eigen::Index(x ^ a.flip)) = a.phase(x) * psi(Eigen::Index(x));
    return out;
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p)
{
    const Eigen::Index dim = Eigen::Index(1) << p.n_qubits();
    Eigen::MatrixXcd M(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        M.col(j) = apply_pauli(p, basis_state(p.n_qubits(), j));
    return M;
}

StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& psi)
{
    if (psi.size() != (Eigen::Index(1) << h.n_qubits))
        throw DimensionMismatch("Hamiltonian and state disagree on qubit count");
    StateVector out = StateVector::Zero(psi.size());
    for (const auto& [p, coeff] : h.terms)
    {
        const PauliAction a(p);
        for (std::uint64_t x = 0; x < std::uint64_t(psi.size()); ++x)
            out(Eigen::Index(x ^ a.flip)) += coeff * a.phase(x) * psi(Eigen::Index(x));
    }
    return out;
}

double expectation(const StateVector& psi, const Hamiltonian& h)
{
    const cd e = psi.dot(apply_hamiltonian(h, psi));
    if (std::abs(e.imag()) > 1e-10 * std::max(1.0, h.h_norm_bound()))
        throw std::logic_error("expectation has a large imaginary part; is H Hermitian?");
    return e.real();
}

double expectation(const DensityMatrix& rho, const Hamiltonian& h)
{
    const Eigen::Index dim = Eigen::Index(1) << h.n_qubits;
    if (rho.rows() != dim || rho.cols() != dim)
        throw DimensionMismatch("Hamiltonian and density matrix disagree on qubit count");
    // tr(ρP) = Σ_x phase(x)·ρ[x, x^f]
    cd e = 0;
    for (const auto& [p, coeff] : h.terms)
    {
        const PauliAction a(p);
        cd t = 0;
        for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
            t += a.phase(x) * rho(Eigen::Index(x), Eigen::Index(x ^ a.flip));
        e += coeff * t;
    }
    if (std::abs(e.imag()) > 1e-10 * std::max(1.0, h.h_norm_bound()))
        throw std::logic_error("expectation has a large imaginary part; is H Hermitian?");
    return e.real();
}

double fidelity(const StateVector& a, const StateVector& b)
{
    if (a.size() != b.size())
        throw DimensionMismatch("states have different dimensions");
    return std::min(1.0, std::norm(a.dot(b)));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma)
{
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw DimensionMismatch("density matrices have different dimensions");
    const DensityMatrix d = rho - sigma;
    const DensityMatrix herm = (d + d.adjoint()) / 2.0;
    return Eigen::SelfAdjointEigenSolver<DensityMatrix>(herm, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().sum();
}

namespace
{

GroundState dense_ground_state(const Hamiltonian& h)
{
    const Eigen::Index dim = Eigen::Index(1) << h.n_qubits;
    Eigen::MatrixXcd H(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        H.col(j) = apply_hamiltonian(h, basis_state(h.n_qubits, j));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((H + H.adjoint()) / 2.0);
    return {es.eigenvalues()(0), es.eigenvectors().col(0), 0};
}

// Lanczos with full reorthogonalization, restarted from the current Ritz vector.
GroundState lanczos_ground_state(const Hamiltonian& h, double tol)
{
    const Eigen::Index dim = Eigen::Index(1) << h.n_qubits;
    const Eigen::Index m = std::min<Eigen::Index>(dim, 120);
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    StateVector start(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        start(i) = g(rng);
    start.normalize();

    GroundState best;
    for (int restart = 0; restart < 30; ++restart)
    {
        Eigen::MatrixXcd V(dim, m);
        std::vector<double> alpha, beta;
        V.col(0) = start;
        Eigen::Index used = 0;
        for (Eigen::Index j = 0; j < m; ++j)
        {
            used = j + 1;
            StateVector w = apply_hamiltonian(h, V.col(j));
            alpha.push_back(V.col(j).dot(w).real());
            for (int pass = 0; pass < 2; ++pass)
                w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
            const double b = w.norm();
            if (j + 1 == m || b < 1e-12)
                break;
            beta.push_back(b);
            V.col(j + 1) = w / b;
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
        for (Eigen::Index i = 0; i < used; ++i)
        {
            T(i, i) = alpha[i];
            if (i + 1 < used)
                T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        StateVector psi = V.leftCols(used) * es.eigenvectors().col(0).cast<std::complex<double>>();
        psi.normalize();
        best.energy = expectation(psi, h);
        best.psi = psi;
        best.residual = (apply_hamiltonian(h, psi) - best.energy * psi).norm();
        if (best.residual <= tol)
            break;
        start = psi;
    }
    return best;
}

} // namespace

GroundState ground_state(const Hamiltonian& h, int max_qubits)
{
    if (h.n_qubits > max_qubits)
        throw TooManyQubits("ground-state solve limited to " + std::to_string(max_qubits) + " qubits");
    for (const auto& [p, c] : h.terms)
        if (p.n_qubits() != h.n_qubits)
            throw DimensionMismatch("Hamiltonian term '" + p.label() + "' has the wrong width");
    const double bound = std::max(h.h_norm_bound(), 1e-300);
    GroundState gs = h.n_qubits <= 8 ? dense_ground_state(h) : lanczos_ground_state(h, 1e-10 * bound);
    gs.residual = (apply_hamiltonian(h, gs.psi) - gs.energy * gs.psi).norm();
    if (gs.residual > 1e-8 * bound)
        gs = dense_ground_state(h);
    // fix the global phase: largest amplitude real and positive
    Eigen::Index k;
    gs.psi.cwiseAbs().maxCoeff(&k);
    gs.psi *= std::conj(gs.psi(k)) / std::abs(gs.psi(k));
    gs.residual = (apply_hamiltonian(h, gs.psi) - gs.energy * gs.psi).norm();
    return gs;
}

} // namespace ctb
