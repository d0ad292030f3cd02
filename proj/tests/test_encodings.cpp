#include <doctest.h>

#include <set>

#include "dense.hpp"
#include "snt/encodings.hpp"
#include "snt/stabilizer.hpp"

using namespace snt;
using dense::Mat;

namespace {

const EncodingKind kAll[] = {EncodingKind::JW, EncodingKind::LE, EncodingKind::VC,
                             EncodingKind::DK, EncodingKind::HX};

std::size_t gf2_rank(const std::vector<PauliOperator>& ops) {
    std::vector<std::vector<uint64_t>> rows;
    for (const auto& p : ops) {
        std::vector<uint64_t> r;
        for (auto w : p.x_words()) r.push_back(w);
        for (auto w : p.z_words()) r.push_back(w);
        rows.push_back(r);
    }
    std::size_t rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows[0].size() * 64;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t w = c / 64, b = c % 64;
        std::size_t piv = rank;
        while (piv < rows.size() && !((rows[piv][w] >> b) & 1)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && ((rows[r][w] >> b) & 1))
                for (std::size_t k = 0; k < rows[r].size(); ++k) rows[r][k] ^= rows[rank][k];
        ++rank;
    }
    return rank;
}

std::vector<PauliOperator> all_stabs(const Encoding& e) {
    std::vector<PauliOperator> s = e.local_stabilizers;
    s.insert(s.end(), e.prep_stabilizers.begin(), e.prep_stabilizers.end());
    return s;
}

StabilizerState prep_state(const Encoding& e) {
    StabilizerState st(e.n_qubits);
    force_stabilizers(st, e.prep_stabilizers);
    return st;
}

PauliOperator loop_product(const Encoding& e, const std::vector<std::size_t>& cyc) {
    PauliOperator op = e.composite_edge(cyc[0], cyc[1]);
    for (std::size_t k = 1; k < cyc.size(); ++k)
        op = multiply(op, e.composite_edge(cyc[k], cyc[(k + 1) % cyc.size()]));
    return op;
}

// occupation-basis matrix of the Fermi-Hubbard chain; bit m of the basis
// index is the occupation of mode m, with the usual ordered-product signs
Mat fock_hamiltonian(std::size_t W, std::size_t H, double t, double U,
                     const std::vector<std::pair<std::size_t, std::size_t>>& hops) {
    std::size_t N = W * H, dim = std::size_t(1) << N;
    Mat h = Mat::Zero(dim, dim);
    auto parity_below = [&](std::size_t state, std::size_t m) {
        std::size_t mask = (std::size_t(1) << m) - 1;
        return __builtin_popcountll(state & mask) & 1;
    };
    for (std::size_t s = 0; s < dim; ++s) {
        for (const auto& [a, b] : hops) {
            // c_a^dag c_b
            if ((s >> b & 1) && !(s >> a & 1)) {
                std::size_t s2 = (s & ~(std::size_t(1) << b)) | (std::size_t(1) << a);
                int sign = (parity_below(s, b) ^ parity_below(s & ~(std::size_t(1) << b), a)) ? -1 : 1;
                h(Eigen::Index(s2), Eigen::Index(s)) += -t * sign;
                h(Eigen::Index(s), Eigen::Index(s2)) += -t * sign;
            }
        }
        double diag = 0;
        for (std::size_t x = 0; x < W; ++x) {
            std::size_t up = 0 * W + x, dn = 1 * W + x;
            if (H >= 2 && (s >> up & 1) && (s >> dn & 1)) diag += U;
        }
        h(Eigen::Index(s), Eigen::Index(s)) += diag;
    }
    return h;
}

Mat encoded_hamiltonian(const Encoding& e, double t, double U,
                        const std::vector<std::pair<std::size_t, std::size_t>>& hops) {
    std::size_t dim = std::size_t(1) << e.n_qubits;
    Mat h = Mat::Zero(dim, dim);
    for (const auto& [a, b] : hops) {
        auto [h1, h2] = e.hopping_operators(a, b);
        h += -(t / 2) * (dense::pauli_matrix(h1) + dense::pauli_matrix(h2));
    }
    Mat id = Mat::Identity(dim, dim);
    for (std::size_t x = 0; x < e.width; ++x) {
        Mat vu = dense::pauli_matrix(e.vertex[e.mode_index(x, 0)]);
        Mat vd = dense::pauli_matrix(e.vertex[e.mode_index(x, 1)]);
        h += (U / 4) * (id - vu - vd + vu * vd);
    }
    return h;
}

std::vector<double> sorted_eigs(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("vertex and edge operators satisfy the index commutation contract") {
    for (auto kind : kAll) {
        for (auto [W, H] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {2, 2}, {4, 2}, {3, 3}}) {
            CAPTURE(encoding_name(kind));
            CAPTURE(W);
            CAPTURE(H);
            Encoding e = build_encoding(kind, W, H);
            REQUIRE(e.vertex.size() == e.n_modes);
            for (const auto& v : e.vertex) CHECK(v.sign() == 1);
            for (const auto& ed : e.edges) CHECK(ed.op.is_hermitian());
            for (std::size_t i = 0; i < e.n_modes; ++i)
                for (std::size_t j = i + 1; j < e.n_modes; ++j)
                    CHECK(e.vertex[i].commutes_with(e.vertex[j]));
            for (const auto& ed : e.edges)
                for (std::size_t i = 0; i < e.n_modes; ++i) {
                    bool incident = (i == ed.a || i == ed.b);
                    CHECK(ed.op.commutes_with(e.vertex[i]) == !incident);
                }
            for (std::size_t i = 0; i < e.edges.size(); ++i)
                for (std::size_t j = i + 1; j < e.edges.size(); ++j) {
                    std::set<std::size_t> s1 = {e.edges[i].a, e.edges[i].b};
                    std::size_t shared = s1.count(e.edges[j].a) + s1.count(e.edges[j].b);
                    CHECK(e.edges[i].op.commutes_with(e.edges[j].op) == (shared != 1));
                }
            // stabilizers commute with the whole algebra and with each other
            auto stabs = all_stabs(e);
            for (const auto& s : stabs) {
                CHECK(s.is_hermitian());
                for (const auto& v : e.vertex) CHECK(s.commutes_with(v));
                for (const auto& ed : e.edges) CHECK(s.commutes_with(ed.op));
            }
            for (const auto& g : e.global_stabilizers) {
                CHECK(g.is_hermitian());
                for (const auto& v : e.vertex) CHECK(g.commutes_with(v));
                stabs.push_back(g);
            }
            for (std::size_t i = 0; i < stabs.size(); ++i)
                for (std::size_t j = i + 1; j < stabs.size(); ++j)
                    CHECK(stabs[i].commutes_with(stabs[j]));
        }
    }
}

TEST_CASE("global parity strings anticommute with row-crossing edges only") {
    for (auto kind : kAll) {
        Encoding e = build_encoding(kind, 4, 2);
        REQUIRE(e.global_stabilizers.size() == 2);
        for (const auto& ed : e.edges) {
            bool crossing = (ed.a / e.width) != (ed.b / e.width);
            for (const auto& g : e.global_stabilizers)
                CHECK(g.commutes_with(ed.op) == !crossing);
        }
    }
}

TEST_CASE("plaquette loops close consistently on the prepared subspace") {
    for (auto kind : kAll) {
        for (auto [W, H] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {2, 2}, {4, 2}, {3, 3}}) {
            if (kind == EncodingKind::LE) continue;  // no edges between rows
            CAPTURE(encoding_name(kind));
            CAPTURE(W);
            CAPTURE(H);
            Encoding e = build_encoding(kind, W, H);
            StabilizerState st = prep_state(e);
            for (std::size_t y = 0; y + 1 < H; ++y)
                for (std::size_t x = 0; x + 1 < W; ++x) {
                    PauliOperator loop = loop_product(
                        e, {e.mode_index(x, y), e.mode_index(x + 1, y),
                            e.mode_index(x + 1, y + 1), e.mode_index(x, y + 1)});
                    REQUIRE(loop.is_hermitian());
                    if (loop.weight() == 0) CHECK(loop.sign() == 1);
                    else CHECK(st.expectation(loop) == 1);
                }
        }
    }
}

TEST_CASE("composite edge exchange rule holds on the prepared subspace") {
    for (auto kind : kAll) {
        if (kind == EncodingKind::LE) continue;  // no edges between rows
        Encoding e = build_encoding(kind, 4, 2);
        StabilizerState st = prep_state(e);
        // corners j,k and l,m of a plaquette: E_jl E_km = -E_jm E_kl
        std::size_t j = e.mode_index(0, 0), l = e.mode_index(1, 0);
        std::size_t k = e.mode_index(1, 1), m = e.mode_index(0, 1);
        PauliOperator p1 = multiply(e.composite_edge(j, l), e.composite_edge(k, m));
        PauliOperator p2 = multiply(e.composite_edge(j, m), e.composite_edge(k, l));
        PauliOperator q = multiply(p1, p2);
        REQUIRE(q.is_hermitian());
        if (q.weight() == 0) CHECK(q.sign() == -1);
        else CHECK(st.expectation(q) == -1);
    }
}

TEST_CASE("benchmark chain metadata") {
    Encoding jw = build_encoding(EncodingKind::JW, 4, 2);
    CHECK(jw.n_qubits == 8);
    CHECK(jw.local_stabilizers.empty());
    Encoding le = build_encoding(EncodingKind::LE, 4, 2);
    CHECK(le.n_qubits == 16);
    CHECK(le.local_stabilizers.size() == 8);
    CHECK(gf2_rank(le.prep_stabilizers) == 8);
    Encoding vc = build_encoding(EncodingKind::VC, 4, 2);
    CHECK(vc.n_qubits == 16);
    CHECK(vc.local_stabilizers.size() == 5);
    CHECK(gf2_rank(vc.prep_stabilizers) == 8);
    Encoding dk = build_encoding(EncodingKind::DK, 4, 2);
    CHECK(dk.n_qubits == 9);
    CHECK(dk.local_stabilizers.size() == 2);
    CHECK(gf2_rank(dk.prep_stabilizers) == 2);
    Encoding hx = build_encoding(EncodingKind::HX, 4, 2);
    CHECK(hx.n_qubits == 16);
    // loops plus boundary checks pin the total parity as well
    CHECK(gf2_rank(hx.prep_stabilizers) == 9);
    // stabilizer weights stay bounded
    for (const auto& s : le.local_stabilizers) CHECK(s.weight() <= 4);
    for (const auto& s : vc.local_stabilizers) CHECK(s.weight() <= 6);
    for (const auto& s : dk.local_stabilizers) CHECK(s.weight() <= 6);
    for (const auto& s : hx.local_stabilizers) CHECK(s.weight() <= 6);
}

TEST_CASE("hopping operator weights per encoding") {
    auto weights = [](const Encoding& e, std::size_t a, std::size_t b) {
        auto [h1, h2] = e.hopping_operators(a, b);
        CHECK(h1.is_hermitian());
        CHECK(h2.is_hermitian());
        return std::pair<std::size_t, std::size_t>{h1.weight(), h2.weight()};
    };
    for (auto [W, H] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 2}, {3, 3}}) {
        for (auto kind : kAll) {
            Encoding e = build_encoding(kind, W, H);
            for (std::size_t y = 0; y < H; ++y)
                for (std::size_t x = 0; x + 1 < W; ++x) {
                    auto [w1, w2] = weights(e, e.mode_index(x, y), e.mode_index(x + 1, y));
                    switch (kind) {
                        case EncodingKind::JW:
                            CHECK(w1 == 2);
                            CHECK(w2 == 2);
                            break;
                        case EncodingKind::LE:
                            CHECK(w1 == 2);
                            CHECK(w2 == 2);
                            break;
                        case EncodingKind::VC:
                            CHECK(w1 <= 4);
                            CHECK(w2 <= 4);
                            break;
                        case EncodingKind::DK:
                            CHECK(w1 <= 3);
                            CHECK(w2 <= 3);
                            break;
                        case EncodingKind::HX:
                            CHECK(std::min(w1, w2) == 2);
                            CHECK(std::max(w1, w2) <= 4);
                            break;
                    }
                }
        }
    }
    // the two reduced ladder hopping terms act on disjoint qubits
    Encoding le = build_encoding(EncodingKind::LE, 4, 2);
    auto [h1, h2] = le.hopping_operators(0, 1);
    CHECK(h1.commutes_with(h2));
    for (std::size_t q = 0; q < le.n_qubits; ++q)
        CHECK(!(h1.letter(q) != 'I' && h2.letter(q) != 'I'));
}

TEST_CASE("encoded chain spectra match the occupation-basis oracle") {
    const double t = 1.0, U = 4.0;
    for (auto kind : kAll) {
        CAPTURE(encoding_name(kind));
        std::size_t W = 2, H = 2;
        Encoding e = build_encoding(kind, W, H);
        REQUIRE(e.n_qubits <= 10);
        std::vector<std::pair<std::size_t, std::size_t>> hops = {
            {e.mode_index(0, 0), e.mode_index(1, 0)}, {e.mode_index(0, 1), e.mode_index(1, 1)}};
        Mat henc = encoded_hamiltonian(e, t, U, hops);
        std::size_t dim = std::size_t(1) << e.n_qubits;
        Mat proj = Mat::Identity(dim, dim);
        for (const auto& s : e.prep_stabilizers)
            proj = proj * 0.5 * (Mat::Identity(dim, dim) + dense::pauli_matrix(s));
        Eigen::SelfAdjointEigenSolver<Mat> pe(proj);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < pe.eigenvalues().size(); ++i)
            if (pe.eigenvalues()(i) > 0.5) keep.push_back(i);
        Mat basis(dim, keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) basis.col(i) = pe.eigenvectors().col(keep[i]);
        auto got = sorted_eigs(basis.adjoint() * henc * basis);

        Mat hf = fock_hamiltonian(W, H, t, U, hops);
        std::size_t N = W * H;
        std::vector<double> want;
        if (keep.size() == (std::size_t(1) << N)) {
            want = sorted_eigs(hf);
        } else {
            REQUIRE(keep.size() == (std::size_t(1) << (N - 1)));
            std::vector<Eigen::Index> even;
            for (std::size_t s = 0; s < (std::size_t(1) << N); ++s)
                if (__builtin_popcountll(s) % 2 == 0) even.push_back(Eigen::Index(s));
            Mat sub(even.size(), even.size());
            for (std::size_t i = 0; i < even.size(); ++i)
                for (std::size_t j = 0; j < even.size(); ++j) sub(i, j) = hf(even[i], even[j]);
            want = sorted_eigs(sub);
        }
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8));
    }
}

TEST_CASE("larger compact grid spectrum with loops in the hopping graph") {
    const double t = 1.0, U = 0.0;
    Encoding e = build_encoding(EncodingKind::DK, 3, 3);
    REQUIRE(e.n_qubits == 11);
    std::vector<std::pair<std::size_t, std::size_t>> hops;
    for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t x = 0; x + 1 < 3; ++x) hops.push_back({e.mode_index(x, y), e.mode_index(x + 1, y)});
    for (std::size_t y = 0; y + 1 < 3; ++y)
        for (std::size_t x = 0; x < 3; ++x) hops.push_back({e.mode_index(x, y), e.mode_index(x, y + 1)});
    Mat henc = encoded_hamiltonian(e, t, U, hops);
    std::size_t dim = std::size_t(1) << e.n_qubits;
    Mat proj = Mat::Identity(dim, dim);
    for (const auto& s : e.prep_stabilizers)
        proj = proj * 0.5 * (Mat::Identity(dim, dim) + dense::pauli_matrix(s));
    Eigen::SelfAdjointEigenSolver<Mat> pe(proj);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < pe.eigenvalues().size(); ++i)
        if (pe.eigenvalues()(i) > 0.5) keep.push_back(i);
    REQUIRE(keep.size() == std::size_t(1) << 9);
    Mat basis(dim, keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) basis.col(i) = pe.eigenvectors().col(keep[i]);
    auto got = sorted_eigs(basis.adjoint() * henc * basis);
    auto want = sorted_eigs(fock_hamiltonian(3, 3, t, U, hops));
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-7));
}

TEST_CASE("occupation observables and report") {
    Encoding e = build_encoding(EncodingKind::LE, 4, 2);
    auto obs = e.occupation_observables();
    CHECK(obs.size() == 8);
    CHECK(obs[0].offset == 0.5);
    CHECK(obs[0].scale == -0.5);
    CHECK(obs[0].op == e.vertex[0]);
    auto pair = e.pair_observable(0, 5);
    CHECK(pair.op == multiply(e.vertex[0], e.vertex[5]));
    std::string rep = e.report();
    CHECK(rep.find("encoding LE 4x2") != std::string::npos);
    CHECK(rep.find("V[0]") != std::string::npos);
    CHECK_THROWS_AS(encoding_from_name("zz"), std::invalid_argument);
    CHECK(encoding_from_name("hx") == EncodingKind::HX);
}

TEST_CASE("closed-form gate counts for the chain") {
    CHECK(tqg_count_formula(EncodingKind::JW, 4, false) == 20);
    CHECK(tqg_count_formula(EncodingKind::LE, 4, false) == 48);
    CHECK(tqg_count_formula(EncodingKind::DK, 4, false) == 44);
    CHECK(tqg_count_formula(EncodingKind::VC, 4, false) == 44);
    CHECK(tqg_count_formula(EncodingKind::HX, 4, false) == 55);
    CHECK(tqg_count_formula(EncodingKind::JW, 16, true) ==
          doctest::Approx(4 * 64 + 6 * 16 - 4 * 4 - 4));
}
