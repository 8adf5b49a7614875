#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siltlab/dyadic.hpp"
#include "siltlab/experiment.hpp"
#include "siltlab/local_time.hpp"
#include "siltlab/oracle.hpp"
#include "siltlab/rare_event.hpp"
#include "siltlab/rwrs.hpp"

namespace py = pybind11;
using namespace siltlab;

namespace {

py::array_t<std::int64_t> to_array(const Trajectory& t) {
    py::array_t<std::int64_t> out({static_cast<py::ssize_t>(t.size()), static_cast<py::ssize_t>(t.dim())});
    std::copy(t.flat().begin(), t.flat().end(), out.mutable_data());
    return out;
}

Trajectory from_array(const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) {
        throw DomainError("path must be a 2-d array of shape (n + 1, d)");
    }
    const auto* p = a.data();
    return Trajectory(static_cast<int>(a.shape(1)), std::vector<std::int64_t>(p, p + a.size()));
}

McConfig mc(std::uint64_t seed, unsigned workers, std::uint64_t chunk) {
    McConfig c;
    c.seed = seed;
    c.workers = workers;
    c.chunk = chunk;
    return c;
}

py::dict tail_dict(const TailEstimate& t) {
    py::dict d;
    d["p_hat"] = t.p_hat;
    d["stderr"] = t.std_error;
    d["samples"] = t.samples;
    d["hits"] = t.hits;
    d["event"] = t.event;
    return d;
}

py::object to_python(const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) {
        return py::none();
    }
    return std::visit([](const auto& x) -> py::object {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
            return py::none();
        } else {
            return py::cast(x);
        }
    }, v);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Self-intersection local times of lattice random walks";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    m.def("simulate_walk", [](int d, std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return to_array(simulate_walk(d, n, rng));
    }, py::arg("d"), py::arg("n"), py::arg("seed") = 1, py::arg("stream") = 0);

    m.def("local_times", [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& path) {
        const auto field = local_times(from_array(path));
        py::dict out;
        for (const auto& e : field.entries()) {
            const Site s = field.packer().unpack(e.key);
            py::tuple key(static_cast<std::size_t>(s.dim()));
            for (int i = 0; i < s.dim(); ++i) {
                key[static_cast<std::size_t>(i)] = s[i];
            }
            out[key] = e.count;
        }
        return out;
    }, py::arg("path"));

    m.def("summarize", [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& path) {
        const auto s = summarize(local_times(from_array(path)));
        py::dict out;
        out["silt"] = s.silt;
        out["range"] = s.range;
        out["horizon"] = s.horizon;
        out["jensen_ok"] = check_jensen(s);
        return out;
    }, py::arg("path"));

    m.def("decompose", [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& path,
                          double threshold, std::vector<double> zs, std::vector<double> deltas) {
        const auto tree = build_tree(from_array(path));
        const auto r = analyze_tree(tree, threshold, zs, deltas);
        bool inclusions = true;
        for (const auto& c : r.inclusion_checks) {
            inclusions = inclusions && c.pass();
        }
        py::dict out;
        out["identity_residual"] = r.identity_residual;
        out["z0"] = r.z0;
        out["j_total"] = r.j_total;
        out["j"] = r.j;
        out["legall_pass"] = r.legall_pass();
        out["inclusion_pass"] = inclusions;
        return out;
    }, py::arg("path"), py::arg("threshold"), py::arg("z") = std::vector<double>{2, 4, 8},
       py::arg("delta") = std::vector<double>{0.1, 0.5});

    m.def("return_probabilities", [](int d, std::uint64_t n) { return return_probabilities(d, n); },
          py::arg("d"), py::arg("n"));
    m.def("expected_silt", [](int d, std::uint64_t n) { return expected_silt(d, n); }, py::arg("d"), py::arg("n"));
    m.def("expected_range", [](int d, std::uint64_t n) { return expected_range(d, n); }, py::arg("d"), py::arg("n"));
    m.def("expected_mutual_intersection", [](int d, std::uint64_t n) { return expected_mutual_intersection(d, n); },
          py::arg("d"), py::arg("n"));
    m.def("survival_prob", [](int d, std::uint64_t n, double radius, const std::string& norm) {
        return survival_prob(d, n, BallSpec{radius, parse_norm(norm)});
    }, py::arg("d"), py::arg("n"), py::arg("radius"), py::arg("norm") = "euclidean");
    m.def("principal_eigen", [](int d, double radius, const std::string& norm, double tol) {
        const auto e = principal_eigen(d, BallSpec{radius, parse_norm(norm)}, tol);
        py::dict out;
        out["eigenvalue"] = e.eigenvalue;
        out["residual"] = e.residual;
        out["iterations"] = e.iterations;
        return out;
    }, py::arg("d"), py::arg("radius"), py::arg("norm") = "euclidean", py::arg("tol") = 1e-12);
    m.def("enumerate_paths", [](int d, std::uint64_t n) {
        const auto dist = enumerate_paths(d, n);
        py::list rows;
        for (const auto& o : dist.outcomes) {
            rows.append(py::make_tuple(o.silt, o.range, o.paths));
        }
        py::dict out;
        out["total_paths"] = dist.total_paths;
        out["outcomes"] = rows;
        out["mean_silt"] = dist.mean_silt();
        out["mean_range"] = dist.mean_range();
        return out;
    }, py::arg("d"), py::arg("n"));
    m.def("gaussian_comparison_constant", [](int d, std::uint64_t n, const std::string& norm) {
        return gaussian_comparison_constant(d, n, parse_norm(norm)).value;
    }, py::arg("d"), py::arg("n"), py::arg("norm") = "euclidean");
    m.def("ld_bound_rhs", &ld_bound_rhs, py::arg("n"), py::arg("gamma"), py::arg("ex2"), py::arg("c"),
          py::arg("x_n"));

    m.def("mc_tail_silt", [](int d, std::uint64_t n, double y, std::uint64_t samples, std::uint64_t seed,
                             unsigned workers, std::uint64_t chunk) {
        const TailEstimate t = [&] {
            py::gil_scoped_release release;
            return mc_tail_silt(d, n, y, samples, mc(seed, workers, chunk));
        }();
        return tail_dict(t);
    }, py::arg("d"), py::arg("n"), py::arg("y"), py::arg("samples"), py::arg("seed") = 1, py::arg("workers") = 1,
       py::arg("chunk") = 4096);
    m.def("mc_tail_range", [](int d, std::uint64_t n, double y, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers, std::uint64_t chunk) {
        const RangeTail r = [&] {
            py::gil_scoped_release release;
            return mc_tail_range(d, n, y, samples, mc(seed, workers, chunk));
        }();
        auto out = tail_dict(r.estimate);
        out["implication_violations"] = r.implication_violations;
        return out;
    }, py::arg("d"), py::arg("n"), py::arg("y"), py::arg("samples"), py::arg("seed") = 1, py::arg("workers") = 1,
       py::arg("chunk") = 4096);

    py::class_<ConfinedSampler>(m, "ConfinedSampler")
        .def(py::init([](int d, std::uint64_t n, double radius, const std::string& norm) {
                 return ConfinedSampler(d, n, BallSpec{radius, parse_norm(norm)});
             }),
             py::arg("d"), py::arg("n"), py::arg("radius"), py::arg("norm") = "euclidean")
        .def_property_readonly("ball_size", &ConfinedSampler::ball_size)
        .def_property_readonly("horizon", &ConfinedSampler::horizon)
        .def("survival", &ConfinedSampler::survival)
        .def("log_survival", &ConfinedSampler::log_survival)
        .def("sample", [](const ConfinedSampler& s, std::uint64_t seed, std::uint64_t stream) {
            RngStream rng(seed, stream);
            return to_array(s.sample(rng));
        }, py::arg("seed") = 1, py::arg("stream") = 0);

    m.def("radius_for_cardinality", [](int d, double target) { return radius_for_cardinality(d, target).radius; },
          py::arg("d"), py::arg("target"));
    m.def("fit_exponent", [](const std::vector<std::pair<double, double>>& points) {
        const auto f = fit_exponent(points);
        py::dict out;
        out["exponent"] = f.exponent;
        out["prefactor"] = f.prefactor;
        out["r_squared"] = f.r_squared;
        return out;
    }, py::arg("points"));

    m.def("zeta_exponent", [](double alpha, double beta) {
        const auto r = zeta_exponent(alpha, beta);
        return py::make_tuple(to_string(r.region), r.zeta ? py::cast(*r.zeta) : py::none());
    }, py::arg("alpha"), py::arg("beta"));
    m.def("scenery_value", [](std::uint64_t seed, const std::vector<std::int64_t>& site, double alpha, double c) {
        return Scenery(seed, SceneryParams{alpha, c}).value(site);
    }, py::arg("seed"), py::arg("site"), py::arg("alpha") = 1.0, py::arg("c") = 1.0);
    m.def("rwrs_sum", [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& path,
                         std::uint64_t seed, double alpha, double c) {
        return rwrs_sum(from_array(path), Scenery(seed, SceneryParams{alpha, c}));
    }, py::arg("path"), py::arg("seed"), py::arg("alpha") = 1.0, py::arg("c") = 1.0);

    m.def("run", [](const std::string& command, const std::map<std::string, std::string>& params) {
        ExperimentConfig cfg;
        cfg.command = command;
        cfg.params = params;
        ResultTable table = [&] {
            py::gil_scoped_release release;
            return run(cfg);
        }();
        py::list records;
        for (std::size_t r = 0; r < table.size(); ++r) {
            py::dict rec;
            for (const auto& col : table.columns()) {
                rec[py::str(col)] = to_python(table.get(r, col));
            }
            records.append(rec);
        }
        return records;
    }, py::arg("command"), py::arg("params") = std::map<std::string, std::string>{},
       "Run a batch experiment; parameters are given as strings, as on the command line.");
}
