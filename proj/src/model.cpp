#include "recip/model.hpp"

#include <sstream>

#include "recip/errors.hpp"
#include "recip/rng.hpp"

namespace recip {

std::vector<std::string> validate_model(const HiddenReciprocalModel& model) {
    std::vector<std::string> violations;
    const int D = model.alphabet_size;
    const int L = model.num_nodes;

    if (D < 1) violations.push_back("alphabet_size < 1");
    if (L < 3) violations.push_back("num_nodes < 3");
    if (static_cast<int>(model.edge_potentials.size()) != L)
        violations.push_back("edge_potentials size != num_nodes");
    if (static_cast<int>(model.node_potentials.size()) != L)
        violations.push_back("node_potentials size != num_nodes");

    for (std::size_t k = 0; k < model.edge_potentials.size(); ++k) {
        const Matrix& psi = model.edge_potentials[k];
        std::ostringstream where;
        where << "edge_potentials[" << k << "]";
        if (psi.rows() != D || psi.cols() != D) {
            violations.push_back(where.str() + " is not D x D");
            continue;
        }
        if ((psi.array() < 0.0).any())
            violations.push_back(where.str() + " has a negative entry");
        else if (!(psi.array() > 0.0).any())
            violations.push_back("degenerate edge potential at " + where.str());
    }
    for (std::size_t k = 0; k < model.node_potentials.size(); ++k) {
        const Vector& phi = model.node_potentials[k];
        std::ostringstream where;
        where << "node_potentials[" << k << "]";
        if (phi.size() != D) {
            violations.push_back(where.str() + " has wrong length");
            continue;
        }
        if ((phi.array() < 0.0).any())
            violations.push_back(where.str() + " has a negative entry");
        else if (!(phi.array() > 0.0).any())
            violations.push_back("degenerate node potential at " + where.str());
    }
    return violations;
}

std::vector<Vector> node_potentials_from_emissions(const EmissionSpec& spec) {
    const Matrix& E = spec.emission_matrix;
    if (E.rows() < 1 || E.cols() < 1)
        throw ValidationError("emission matrix is empty");
    if ((E.array() < 0.0).any())
        throw ValidationError("emission matrix has a negative entry");
    for (Eigen::Index a = 0; a < E.rows(); ++a) {
        if (std::abs(E.row(a).sum() - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "emission matrix row " << a << " does not sum to 1";
            throw ValidationError(msg.str());
        }
    }
    std::vector<Vector> potentials;
    potentials.reserve(spec.observations.size());
    for (std::size_t k = 0; k < spec.observations.size(); ++k) {
        const int o = spec.observations[k];
        if (o < 0 || o >= E.cols()) {
            std::ostringstream msg;
            msg << "observation symbol " << o << " at node " << k
                << " outside [0, " << E.cols() << ")";
            throw ValidationError(msg.str());
        }
        potentials.push_back(E.col(o));
    }
    return potentials;
}

HiddenReciprocalModel random_model(int alphabet_size, int num_nodes,
                                   std::uint64_t seed, double positivity_floor) {
    if (alphabet_size < 2) throw ValidationError("random_model: alphabet_size < 2");
    if (num_nodes < 3) throw ValidationError("random_model: num_nodes < 3");
    if (positivity_floor < 0.0) throw ValidationError("random_model: negative positivity_floor");

    Rng rng(seed);
    auto draw_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        do {
            for (Eigen::Index i = 0; i < rows; ++i)
                for (Eigen::Index j = 0; j < cols; ++j)
                    m(i, j) = rng.uniform(positivity_floor, 1.0);
        } while (!(m.array() > 0.0).any());
        return m;
    };

    HiddenReciprocalModel model;
    model.alphabet_size = alphabet_size;
    model.num_nodes = num_nodes;
    model.edge_potentials.reserve(num_nodes);
    model.node_potentials.reserve(num_nodes);
    for (int k = 0; k < num_nodes; ++k)
        model.edge_potentials.push_back(draw_matrix(alphabet_size, alphabet_size));
    for (int k = 0; k < num_nodes; ++k)
        model.node_potentials.push_back(draw_matrix(alphabet_size, 1).col(0));
    return model;
}

HiddenReciprocalModel uniform_model(int alphabet_size, int num_nodes) {
    HiddenReciprocalModel model;
    model.alphabet_size = alphabet_size;
    model.num_nodes = num_nodes;
    model.edge_potentials.assign(num_nodes, Matrix::Ones(alphabet_size, alphabet_size));
    model.node_potentials.assign(num_nodes, Vector::Ones(alphabet_size));
    return model;
}

}  // namespace recip
