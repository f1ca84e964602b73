#include "icecast/model_io.hpp"

#include <map>

#include "icecast/error.hpp"
#include "icecast/numfmt.hpp"
#include "text_lines.hpp"

namespace icecast {
namespace {

constexpr std::string_view kHeader = "#icemodel v1";

template <typename Derived>
std::string join(const Eigen::DenseBase<Derived>& values) {
    std::string out;
    for (Eigen::Index i = 0; i < values.rows(); ++i)
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (!out.empty()) out += ' ';
            out += format_exact(values(i, j));
        }
    return out;
}

std::vector<double> numbers(std::string_view text) {
    std::vector<double> out;
    for (auto tok : split(text, ' '))
        if (!tok.empty()) out.push_back(parse_double(tok));
    return out;
}

Eigen::VectorXd vector_of(const std::vector<double>& v, Eigen::Index n, std::string_view key) {
    if (static_cast<Eigen::Index>(v.size()) != n)
        throw Error(ErrorKind::Parse, "'" + std::string(key) + "' needs " + std::to_string(n) + " values");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

Eigen::MatrixXd matrix_of(const std::vector<double>& v, Eigen::Index n, std::string_view key) {
    if (static_cast<Eigen::Index>(v.size()) != n * n)
        throw Error(ErrorKind::Parse, "'" + std::string(key) + "' needs " + std::to_string(n * n) + " values");
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), n, n);
}

ModelDocument build_document(const std::map<std::string, std::string, std::less<>>& kv, std::size_t header_line) {
    auto get = [&](std::string_view key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw Error(ErrorKind::Parse, "model document missing '" + std::string(key) + "'", header_line);
        return it->second;
    };
    ModelDocument doc;
    const long long point = parse_integer(get("point"));
    if (point <= 0) throw Error(ErrorKind::Parse, "point must be positive", header_line);
    doc.point_id = static_cast<PointId>(point);

    StateSpaceModel model = build_model(parse_model_kind(get("kind")), static_cast<int>(parse_integer(get("harmonics"))),
                                        parse_double(get("period")));
    const auto n = model.dim();
    model.q = vector_of(numbers(get("q")), n, "q");
    model.r = parse_double(get("r"));
    model.check();

    doc.fit.model = model;
    doc.fit.init.m = vector_of(numbers(get("init_mean")), n, "init_mean");
    doc.fit.init.P = matrix_of(numbers(get("init_cov")), n, "init_cov");
    doc.fit.init.t = -1;
    doc.fit.log_likelihood = parse_double(get("log_likelihood"));
    doc.fit.iterations = static_cast<int>(parse_integer(get("iterations")));
    const std::string& conv = get("converged");
    if (conv != "true" && conv != "false") throw Error(ErrorKind::Parse, "converged must be true/false", header_line);
    doc.fit.converged = conv == "true";

    doc.final_day = parse_day(get("state_day"));
    doc.final_state.m = vector_of(numbers(get("state_mean")), n, "state_mean");
    doc.final_state.P = matrix_of(numbers(get("state_cov")), n, "state_cov");
    doc.final_state.t = 0;
    return doc;
}

}  // namespace

std::string serialize_models(const std::vector<ModelDocument>& docs) {
    std::string out;
    for (const auto& d : docs) {
        const StateSpaceModel& m = d.fit.model;
        if (m.kind == ModelKind::Custom)
            throw Error(ErrorKind::InvalidArgument, "custom models have no file representation");
        out += kHeader;
        out += '\n';
        out += "point=" + std::to_string(d.point_id) + '\n';
        out += "kind=" + std::string(to_string(m.kind)) + '\n';
        out += "harmonics=" + std::to_string(m.harmonics) + '\n';
        out += "period=" + format_exact(m.seasonal_period) + '\n';
        out += "q=" + join(m.q) + '\n';
        out += "r=" + format_exact(m.r) + '\n';
        out += "init_mean=" + join(d.fit.init.m) + '\n';
        out += "init_cov=" + join(d.fit.init.P) + '\n';
        out += "state_day=" + format_day(d.final_day) + '\n';
        out += "state_mean=" + join(d.final_state.m) + '\n';
        out += "state_cov=" + join(d.final_state.P) + '\n';
        out += "log_likelihood=" + format_exact(d.fit.log_likelihood) + '\n';
        out += "iterations=" + std::to_string(d.fit.iterations) + '\n';
        out += std::string("converged=") + (d.fit.converged ? "true" : "false") + '\n';
    }
    return out;
}

std::vector<ModelDocument> parse_models(std::string_view text) {
    std::vector<ModelDocument> docs;
    std::map<std::string, std::string, std::less<>> kv;
    std::size_t header_line = 0;
    auto flush = [&] {
        if (header_line == 0) return;
        try {
            docs.push_back(build_document(kv, header_line));
        } catch (const Error& e) {
            if (e.line()) throw;
            throw Error(ErrorKind::Parse, e.message(), header_line);
        }
        kv.clear();
    };
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty()) return;
        if (line.front() == '#') {
            if (line.rfind("#icemodel", 0) == 0) {
                if (line != kHeader)
                    throw Error(ErrorKind::Parse, "unsupported model header '" + std::string(line) + "'", lineno);
                flush();
                header_line = lineno;
            }
            return;
        }
        if (header_line == 0) throw Error(ErrorKind::Parse, "content before '#icemodel v1' header", lineno);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, "expected key=value", lineno);
        if (!kv.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1))).second)
            throw Error(ErrorKind::Parse, "duplicate key '" + std::string(line.substr(0, eq)) + "'", lineno);
    });
    flush();
    if (docs.empty()) throw Error(ErrorKind::Parse, "no '#icemodel v1' document found");
    return docs;
}

}  // namespace icecast
