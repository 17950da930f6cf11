#include "nbm/numerics.hpp"

#include <limits>

namespace nbm {

namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

// Thin QR M = Q1 R of a full-column-rank matrix.
struct ThinQr {
    Eigen::MatrixXd q1;
    Eigen::MatrixXd r;
};

ThinQr thin_qr(const Eigen::MatrixXd& M) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    ThinQr out;
    out.q1 = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), M.cols());
    out.r = qr.matrixQR().topRows(M.cols()).triangularView<Eigen::Upper>();
    return out;
}

void require_full_rank(const Eigen::MatrixXd& M) {
    if (M.cols() == 0) return;
    if (M.cols() > M.rows()) throw RankDeficientError("more columns than rows");
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (!numerically_full_rank(sv(sv.size() - 1), sv(0), M.rows())) {
        throw RankDeficientError("evaluation matrix is numerically rank deficient");
    }
}

// Columns of M_O(X) for d/dx_k, and the vector d_k t(X) - M_{d_k O}(X) alpha.
Eigen::VectorXd derivative_defect(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                  const PowerProduct& t, const Eigen::VectorXd& alpha,
                                  std::size_t k) {
    Eigen::VectorXd v = eval_vector(formal_partial(t, k), points);
    if (!ideal.empty()) v -= eval_partial_matrix(ideal.terms(), k, points) * alpha;
    return v;
}

void check_inputs(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                  const LeastSquaresSolution& sol) {
    if (sol.alpha.size() != static_cast<Eigen::Index>(ideal.size()) ||
        sol.residual.size() != points.size()) {
        throw std::invalid_argument("least-squares solution does not match order ideal and points");
    }
    if (!sol.rank_ok) throw RankDeficientError("least-squares matrix is rank deficient");
}

}  // namespace

bool numerically_full_rank(double smallest, double largest, Eigen::Index rows) {
    return smallest > static_cast<double>(rows) * kMachineEps * largest;
}

LeastSquaresSolution least_squares(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
    if (M.rows() != b.size()) throw std::invalid_argument("right-hand side length does not match matrix");
    LeastSquaresSolution sol;
    if (M.cols() == 0) {
        sol.alpha = Eigen::VectorXd(0);
        sol.residual = b;
        return sol;
    }
    if (M.cols() > M.rows()) {
        throw std::invalid_argument("least-squares matrix has more columns than rows");
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    sol.largest_singular_value = sv(0);
    sol.smallest_singular_value = sv(sv.size() - 1);
    sol.rank_ok = numerically_full_rank(sol.smallest_singular_value, sol.largest_singular_value, M.rows());

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    sol.alpha = qr.solve(b);
    sol.residual = b - M * sol.alpha;
    return sol;
}

Eigen::MatrixXd projector_complement(const Eigen::MatrixXd& M) {
    const Eigen::Index s = M.rows();
    if (M.cols() == 0) return Eigen::MatrixXd::Identity(s, s);
    require_full_rank(M);
    const ThinQr qr = thin_qr(M);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(s, s) - qr.q1 * qr.q1.transpose();
    return 0.5 * (P + P.transpose());
}

DependenceBound dependence_bound(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                 const PowerProduct& t, const LeastSquaresSolution& sol) {
    check_inputs(points, ideal, sol);
    const EvaluationMatrix M = eval_matrix(ideal.terms(), points);

    DependenceBound out;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(points.size());
    for (Eigen::Index k = 0; k < points.dimension(); ++k) {
        const double eps = points.tolerance()(k);
        Eigen::VectorXd term = eps * derivative_defect(points, ideal, t, sol.alpha,
                                                       static_cast<std::size_t>(k)).cwiseAbs();
        sum += term;
        out.per_variable_terms.push_back(std::move(term));
    }
    out.bound = projector_complement(M.entries).cwiseAbs() * sum;
    return out;
}

FirstOrderDeltas first_order_deltas(const EmpiricalPointSet& points, const OrderIdeal& ideal,
                                    const PowerProduct& t, const LeastSquaresSolution& sol,
                                    const PerturbationSample& sample) {
    check_inputs(points, ideal, sol);
    if (sample.offsets().rows() != points.size() || sample.offsets().cols() != points.dimension()) {
        throw std::invalid_argument("perturbation shape does not match point set");
    }
    const Eigen::Index s = points.size();
    const auto k_terms = static_cast<Eigen::Index>(ideal.size());

    // S = sum_k E_k (d_k t - M_{d_k O} alpha),  C = sum_k M_{d_k O}^T E_k.
    Eigen::VectorXd S = Eigen::VectorXd::Zero(s);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k_terms, s);
    for (Eigen::Index k = 0; k < points.dimension(); ++k) {
        const Eigen::VectorXd e = sample.column(k);
        const auto kk = static_cast<std::size_t>(k);
        S += e.cwiseProduct(derivative_defect(points, ideal, t, sol.alpha, kk));
        if (k_terms > 0) {
            C += eval_partial_matrix(ideal.terms(), kk, points).transpose() * e.asDiagonal();
        }
    }

    FirstOrderDeltas out;
    if (k_terms == 0) {
        out.delta_rho = S;
        out.delta_alpha = Eigen::VectorXd(0);
        return out;
    }

    const EvaluationMatrix M = eval_matrix(ideal.terms(), points);
    require_full_rank(M.entries);
    const ThinQr qr = thin_qr(M.entries);
    const auto R = qr.r.triangularView<Eigen::Upper>();

    // M^+ = R^{-1} Q1^T, (M^+)^T = Q1 R^{-T}, (M^T M)^{-1} = R^{-1} R^{-T}.
    const Eigen::VectorXd c_rho = C * sol.residual;
    const Eigen::VectorXd r_inv_t_c_rho = R.transpose().solve(c_rho);
    const Eigen::VectorXd q1t_s = qr.q1.transpose() * S;

    out.delta_rho = (S - qr.q1 * q1t_s) - qr.q1 * r_inv_t_c_rho;
    out.delta_alpha = R.solve(q1t_s) + R.solve(r_inv_t_c_rho);
    return out;
}

}  // namespace nbm
