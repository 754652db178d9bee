#include "meshpix/config.hpp"

#include <fstream>

#include "meshpix/errors.hpp"

namespace meshpix {

RunConfig::RunConfig() {
    defaults_ = {
        {"canny.sigma", "1.4"},
        {"canny.low", "0.1"},
        {"canny.high", "0.25"},
        {"pca.window", "11"},
        {"pca.dense_spacing", "3"},
        {"pca.sparse_spacing", "10"},
        {"pca.anisotropy_threshold", "0.08"},
        {"halftone.fraction", "0.07"},
        {"uniform.spacing", "4"},
        {"min_separation", "1.5"},
        {"tensor.sigma", "1.5"},
        {"tensor.kappa", "9"},
        {"tensor.tau", "16"},
        {"rbf.kernel", "mq"},
        {"rbf.shape_c", "0.5"},
        {"restore.method", "triangle_arbf"},
        {"restore.scale", "1"},
        {"restore.support", "one_ring"},
        {"restore.knn_k", "13"},
        {"restore.metric_eval", "centroid"},
    };
    values_ = defaults_;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw InputError("unknown config key '" + key + "'");
    it->second = value;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("unreadable config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config file " + path + ":" + std::to_string(lineno) +
                             ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

double RunConfig::get_real(const std::string& key) const {
    const std::string& v = get_string(key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "' is not a number: '" + v + "'");
    }
}

int RunConfig::get_int(const std::string& key) const {
    const double d = get_real(key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw InputError("config key '" + key + "' must be an integer");
    return i;
}

const std::string& RunConfig::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InputError("unknown config key '" + key + "'");
    return it->second;
}

std::vector<std::string> RunConfig::overrides() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (defaults_.at(k) != v) out.push_back(k + "=" + v);
    return out;
}

SamplingConfig RunConfig::sampling() const {
    SamplingConfig s;
    s.canny_sigma = get_real("canny.sigma");
    s.canny_low = get_real("canny.low");
    s.canny_high = get_real("canny.high");
    s.pca_window = get_int("pca.window");
    s.pca_dense_spacing = get_real("pca.dense_spacing");
    s.pca_sparse_spacing = get_real("pca.sparse_spacing");
    s.pca_anisotropy_threshold = get_real("pca.anisotropy_threshold");
    s.halftone_fraction = get_real("halftone.fraction");
    s.uniform_spacing = get_real("uniform.spacing");
    s.min_separation = get_real("min_separation");
    s.validate();
    return s;
}

RestoreConfig RunConfig::restore() const {
    RestoreConfig r;
    r.method = method_from_name(get_string("restore.method"));
    r.kernel.kind = kernel_from_name(get_string("rbf.kernel"));
    r.kernel.c = get_real("rbf.shape_c");
    if (r.kernel.kind != KernelKind::tps && !(r.kernel.c > 0.0))
        throw InputError("rbf.shape_c must be > 0");
    r.scale = get_real("restore.scale");
    if (r.scale < 1.0) throw InputError("restore.scale must be >= 1");
    const std::string& sup = get_string("restore.support");
    if (sup == "one_ring")
        r.support = SupportPolicy::one_ring;
    else if (sup == "knn")
        r.support = SupportPolicy::knn;
    else
        throw InputError("restore.support must be one_ring or knn");
    r.knn_k = get_int("restore.knn_k");
    if (r.knn_k < 1) throw InputError("restore.knn_k must be >= 1");
    const std::string& me = get_string("restore.metric_eval");
    if (me == "pixel")
        r.metric_eval = MetricEval::pixel;
    else if (me == "centroid")
        r.metric_eval = MetricEval::centroid;
    else
        throw InputError("restore.metric_eval must be pixel or centroid");
    return r;
}

void RunConfig::validate() const {
    sampling();
    restore();
    if (tensor_sigma() < 0.0) throw InputError("tensor.sigma must be >= 0");
    if (tensor_kappa() < 0.0) throw InputError("tensor.kappa must be >= 0");
    if (tensor_tau() < 0.0) throw InputError("tensor.tau must be >= 0");
}

}  // namespace meshpix
