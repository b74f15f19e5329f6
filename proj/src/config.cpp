#include "hutchinf/config.hpp"

#include <json.hpp>

#include <stdexcept>

namespace hutchinf {

using nlohmann::json;

namespace {

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument(std::string("config: unknown key '") +
                                        it.key() + "' in " + where);
    }
}

Point parse_point(const json& j, const char* where) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string("config: ") + where +
                                    " must be a nonempty array");
    Point p;
    for (const auto& v : j) p.push_back(v.get<double>());
    return p;
}

MetricParams parse_metric(const json& j) {
    require_keys(j, {"kind", "q", "p"}, "metric");
    std::string kind = j.at("kind").get<std::string>();
    double q = j.at("q").get<double>();
    if (kind == "sup") return MetricParams::sup(q);
    if (kind == "lp") return MetricParams::lp(j.at("p").get<double>(), q);
    throw std::invalid_argument("config: metric kind must be sup or lp");
}

BaseMetric parse_base(const std::string& s) {
    if (s == "euclidean") return BaseMetric::euclidean;
    if (s == "maximum") return BaseMetric::maximum;
    if (s == "absolute-1d") return BaseMetric::absolute_1d;
    throw std::invalid_argument("config: unknown base metric " + s);
}

GifsSystem parse_system(const json& j, const json* metric) {
    require_keys(j, {"name", "maps", "base", "dim", "seed_point"}, "system");
    if (j.contains("name")) {
        if (j.size() != 1)
            throw std::invalid_argument("config: named system takes no other keys");
        return system_by_name(j.at("name").get<std::string>());
    }
    GifsSystem sys;
    sys.name = "custom";
    sys.dim = j.at("dim").get<int>();
    sys.base = parse_base(j.at("base").get<std::string>());
    sys.seed_point = parse_point(j.at("seed_point"), "seed_point");
    if (!metric)
        throw std::invalid_argument("config: custom systems need a metric block");
    MetricParams mp = parse_metric(*metric);
    for (const json& mj : j.at("maps")) {
        require_keys(mj, {"kind", "c", "r", "offset", "s", "b", "floor", "value",
                          "c1", "c2"},
                     "map");
        std::string kind = mj.at("kind").get<std::string>();
        GifsMap f = [&] {
            if (kind == "affine_sum")
                return GifsMap::affine_sum(mj.at("c").get<double>(),
                                           mj.at("r").get<double>(),
                                           parse_point(mj.at("offset"), "offset"));
            if (kind == "sup_scale")
                return GifsMap::sup_scale(mj.at("s").get<double>(),
                                          mj.at("b").get<double>(),
                                          mj.value("floor", 0.0));
            if (kind == "constant")
                return GifsMap::constant(parse_point(mj.at("value"), "value"));
            throw std::invalid_argument("config: unknown map kind " + kind);
        }();
        auto cert = derive_cert(f, mp);
        if (!cert)
            throw std::invalid_argument(
                "config: no finite certificate for a map under the given metric");
        f.with_cert(*cert);
        sys.maps.push_back(std::move(f));
        sys.flags.push_back(MapFlags{mj.value("c1", true), mj.value("c2", true)});
    }
    sys.validate();
    return sys;
}

}  // namespace

GifsSystem system_by_name(const std::string& name) {
    if (name == "ex5") return planar_ex5();
    if (name == "sup-pair") return sup_pair_system();
    if (name == "half-sup") return half_sup_system();
    if (name == "sup-interval") return sup_interval_system();
    throw std::invalid_argument("unknown system: " + name);
}

SetSeq default_seeds(const GifsSystem& sys) {
    if (sys.name == "sup-pair" || sys.name == "half-sup")
        return SetSeq::constant(reciprocal_grid(64));
    if (sys.name == "sup-interval")
        return SetSeq::constant(interval_grid(0.0, 2.0, 128));
    return SetSeq::constant(FiniteSet::singleton(sys.seed_point));
}

Viewport default_viewport(const std::string& system_name) {
    Viewport vp;
    if (system_name == "ex5") {
        vp.min = {-0.05, -0.05};
        vp.max = {0.7, 0.7};
    } else {
        vp.min = {-0.05, -0.05};
        vp.max = {1.05, 1.05};
    }
    return vp;
}

ExperimentConfig parse_config_json(const std::string& text) {
    json j = json::parse(text);
    require_keys(j, {"schema", "system", "metric", "run", "output"}, "config");
    ExperimentConfig cfg;
    cfg.schema = j.at("schema").get<int>();
    if (cfg.schema != 1)
        throw std::invalid_argument("config: unsupported schema version");
    const json* metric = j.contains("metric") ? &j.at("metric") : nullptr;
    cfg.system = parse_system(j.at("system"), metric);
    if (j.contains("run")) {
        const json& r = j.at("run");
        require_keys(r, {"depth", "prune_eps", "prefix", "tol", "seed"}, "run");
        cfg.run.depth = r.value("depth", cfg.run.depth);
        cfg.run.prune_eps = r.value("prune_eps", cfg.run.prune_eps);
        cfg.run.prefix = r.value("prefix", cfg.run.prefix);
        cfg.run.tol = r.value("tol", cfg.run.tol);
        cfg.run.seed = r.value("seed", cfg.run.seed);
    }
    cfg.viewport = default_viewport(cfg.system.name);
    if (j.contains("output")) {
        const json& o = j.at("output");
        require_keys(o, {"path", "viewport"}, "output");
        cfg.out_path = o.value("path", std::string{});
        if (o.contains("viewport")) {
            const json& v = o.at("viewport");
            require_keys(v, {"min", "max", "resolution"}, "viewport");
            cfg.viewport.min = parse_point(v.at("min"), "viewport.min");
            cfg.viewport.max = parse_point(v.at("max"), "viewport.max");
            cfg.viewport.resolution = v.value("resolution", 512);
            cfg.viewport.validate();
        }
    }
    return cfg;
}

}  // namespace hutchinf
