#include "rwsolv/precond.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rwsolv/matrix_market.hpp"

namespace rwsolv {

IncompleteLdl IncompleteLdl::identity(int n) {
    IncompleteLdl f;
    f.lower = SparseMatrix(n);
    for (int i = 0; i < n; ++i) {
        f.lower.col_idx.push_back(i);
        f.lower.values.push_back(1.0);
        f.lower.row_ptr[i + 1] = i + 1;
    }
    f.diag.assign(n, 1.0);
    f.ordering = Permutation::identity(n);
    f.meta.method = "identity";
    return f;
}

void save_ldl(const std::string& base_path, const IncompleteLdl& f) {
    write_matrix_market(base_path + ".L.mtx", f.lower);
    write_vector_market(base_path + ".D.mtx", f.diag);

    nlohmann::json side;
    side["ordering"] = f.ordering.forward;
    side["seed"] = f.meta.seed;
    side["delta"] = f.meta.delta;
    side["alpha"] = f.meta.alpha;
    side["min_walks"] = f.meta.min_walks;
    side["method"] = f.meta.method;
    side["sign_scaling"] = f.meta.sign_scaling;
    side["walk_reuse"] = f.meta.walk_reuse;

    std::ofstream out(base_path + ".json");
    if (!out) throw std::runtime_error("cannot open '" + base_path + ".json' for writing");
    out << side.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + base_path + ".json'");
}

IncompleteLdl load_ldl(const std::string& base_path) {
    IncompleteLdl f;
    f.lower = read_matrix_market(base_path + ".L.mtx");
    f.diag = read_vector_market(base_path + ".D.mtx");
    if (static_cast<int>(f.diag.size()) != f.lower.n)
        throw std::runtime_error("load_ldl: factor dimension mismatch");

    std::ifstream in(base_path + ".json");
    if (!in) throw std::runtime_error("cannot open '" + base_path + ".json'");
    nlohmann::json side;
    in >> side;
    f.ordering = Permutation::from_forward(side.at("ordering").get<std::vector<int>>());
    if (f.ordering.size() != f.lower.n)
        throw std::runtime_error("load_ldl: ordering dimension mismatch");
    f.meta.seed = side.at("seed").get<std::uint64_t>();
    f.meta.delta = side.at("delta").get<double>();
    f.meta.alpha = side.at("alpha").get<double>();
    f.meta.min_walks = side.at("min_walks").get<int>();
    f.meta.method = side.value("method", "stochastic");
    f.meta.sign_scaling = side.value("sign_scaling", false);
    f.meta.walk_reuse = side.value("walk_reuse", false);
    return f;
}

}  // namespace rwsolv
