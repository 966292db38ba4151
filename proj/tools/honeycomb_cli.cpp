// Command-line front end: classify Schlafli symbols, render boundary images,
// export printable edge meshes, and batch-generate image tables.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "honeycomb/honeycomb.hpp"

namespace hc = honeycomb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCompute = 3;

struct ViewportSpec {
    bool set = false;
    double cx = 0, cy = 0, half = 0;
};

bool parse_resolution(const std::string& s, int& w, int& h) {
    auto x = s.find('x');
    if (x == std::string::npos) x = s.find('X');
    try {
        if (x == std::string::npos) {
            w = h = std::stoi(s);
        } else {
            w = std::stoi(s.substr(0, x));
            h = std::stoi(s.substr(x + 1));
        }
    } catch (...) {
        return false;
    }
    return w > 0 && h > 0;
}

int cmd_classify(const std::vector<std::string>& symbols) {
    for (const auto& text : symbols) {
        hc::SchlafliSymbol s = hc::parse(text);
        hc::Geometry g = hc::classify_3d(s);
        std::ostringstream line;
        line << hc::to_string(s) << ": " << hc::to_string(g)
             << ", vertices: " << hc::to_string(hc::vertex_type(s))
             << ", cells: " << hc::to_string(hc::cell_type(s));
        if (hc::classify_2d(s.p, s.q) != hc::Geometry::Hyperbolic) {
            line << ", cell dihedral: " << hc::dihedral_angle(s.p, s.q);
        }
        if (g == hc::Geometry::Hyperbolic && hc::cell_type(s) == hc::ElementType::Material) {
            line << ", inradius: " << hc::inradius(s);
        }
        std::cout << line.str() << '\n';
    }
    return kExitOk;
}

hc::Viewport make_viewport(const hc::Simplex& sx, const ViewportSpec& spec,
                           const std::string& center_mode, int w, int h) {
    hc::Viewport vp = hc::default_viewport(sx);
    vp.width = w;
    vp.height = h;
    hc::Centering c = hc::Centering::Auto;
    if (center_mode == "cell") c = hc::Centering::Cell;
    else if (center_mode == "edge") c = hc::Centering::Edge;
    if (c == hc::Centering::Auto) c = hc::default_centering(sx.symbol);
    if (c == hc::Centering::Edge) {
        vp.pre_isometry = hc::edge_centering_isometry(sx);
        vp.half_extent = 3.0;
    }
    if (spec.set) {
        vp.center = hc::Vec3{spec.cx, spec.cy, 0};
        vp.half_extent = spec.half;
    }
    return vp;
}

int render_one(const hc::SchlafliSymbol& s, const hc::Viewport& vp, const hc::Palette& pal,
               double banana_radius, int max_iter, int workers, const std::string& out) {
    hc::Image img = hc::render(s, vp, pal, banana_radius, max_iter, workers);
    hc::write_png(out, img);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regular honeycomb classifier, boundary renderer, and mesh exporter"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand("classify", "Classify {p,q,r} symbols");
    std::vector<std::string> classify_symbols;
    classify->add_option("symbols", classify_symbols, "Schlafli symbols, e.g. {4,3,5}")
        ->required();

    // shared render options
    std::string symbol_text, res_text = "512", center_mode = "auto", out_path = "out.png";
    std::string viewport_text;
    double banana_radius = hc::kDefaultBananaRadius, rate_k = 1.0, palette_offset = 0.0;
    int palette_direction = 1, max_iter = hc::kDefaultMaxIter, workers = 0;

    auto* render = app.add_subcommand("render", "Render the boundary-at-infinity image");
    render->add_option("--symbol", symbol_text, "Schlafli symbol")->required();
    render->add_option("--res", res_text, "Resolution WxH (or one number)");
    render->add_option("--center", center_mode, "cell|edge|auto")
        ->check(CLI::IsMember({"cell", "edge", "auto"}));
    render->add_option("--viewport", viewport_text, "cx,cy,half (overrides the default window)");
    render->add_option("--banana-radius", banana_radius, "Apparent-edge thickness (hyperbolic)");
    render->add_option("--rate-k", rate_k, "Palette rate constant");
    render->add_option("--max-iter", max_iter, "Canonicalization iteration cap");
    render->add_option("--palette-offset", palette_offset, "Start offset along the color hexagon");
    render->add_option("--palette-direction", palette_direction, "+1 or -1")
        ->check(CLI::IsMember({1, -1}));
    render->add_option("--workers", workers, "Worker threads (0 = hardware)");
    render->add_option("--out", out_path, "Output PNG path");

    // mesh
    std::string policy_text = "accurate", stl_path, obj_path, edges_path;
    double r0 = 0.06, scale_mm = 50.0, min_diam_mm = 1.0, min_len = 0.02;
    int max_depth = 40, rings = 24, around = 12;
    bool no_cull = false;
    auto* mesh = app.add_subcommand("mesh", "Export a printable edge framework");
    mesh->add_option("--symbol", symbol_text, "Schlafli symbol")->required();
    mesh->add_option("--policy", policy_text, "accurate|clamped|constant")
        ->check(CLI::IsMember({"accurate", "clamped", "constant"}));
    mesh->add_option("--r0", r0, "Tube thickness parameter (tanh of half the hyperbolic radius)");
    mesh->add_option("--scale-mm", scale_mm, "Millimetres per model unit");
    mesh->add_option("--min-diam-mm", min_diam_mm, "Minimum printable tube diameter");
    mesh->add_option("--min-len", min_len, "Edge recursion cutoff (euclidean length)");
    mesh->add_option("--max-depth", max_depth, "Edge recursion depth cap");
    mesh->add_option("--rings", rings, "Tube rings per edge");
    mesh->add_option("--around", around, "Vertices per tube ring");
    mesh->add_flag("--no-cull", no_cull, "Skip the culling stage");
    mesh->add_option("--out", stl_path, "Output STL path");
    mesh->add_option("--obj", obj_path, "Optional OBJ path");
    mesh->add_option("--edges-out", edges_path, "Optional edge list (one edge per line)");

    // table
    std::string grid_text, out_dir = "table";
    std::vector<std::string> term_list = {"3", "4", "5", "6", "7", "i"};
    auto* table = app.add_subcommand("table", "Render a grid of honeycomb images");
    table->add_option("--grid", grid_text,
                      "Symbol pattern with letters for the varying slots, e.g. {3,q,r}")
        ->required();
    table->add_option("--terms", term_list, "Values each letter ranges over");
    table->add_option("--res", res_text, "Resolution WxH");
    table->add_option("--out-dir", out_dir, "Output directory");
    table->add_option("--workers", workers, "Worker threads (0 = hardware)");
    table->add_option("--rate-k", rate_k, "Palette rate constant");
    table->add_option("--max-iter", max_iter, "Canonicalization iteration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? kExitOk : kExitUsage;
    }

    try {
        if (classify->parsed()) return cmd_classify(classify_symbols);

        if (render->parsed()) {
            int w, h;
            if (!parse_resolution(res_text, w, h)) {
                std::cerr << "bad --res value: " << res_text << '\n';
                return kExitUsage;
            }
            ViewportSpec spec;
            if (!viewport_text.empty()) {
                double cx, cy, half;
                if (std::sscanf(viewport_text.c_str(), "%lf,%lf,%lf", &cx, &cy, &half) != 3) {
                    std::cerr << "bad --viewport value: " << viewport_text << '\n';
                    return kExitUsage;
                }
                spec = {true, cx, cy, half};
            }
            hc::SchlafliSymbol s = hc::parse(symbol_text);
            if (hc::classify_3d(s) != hc::Geometry::Hyperbolic) {
                std::cerr << hc::to_string(s) << " is not hyperbolic; no boundary image\n";
                return kExitCompute;
            }
            hc::Simplex sx = hc::build_simplex(s);
            hc::Viewport vp = make_viewport(sx, spec, center_mode, w, h);
            hc::Palette pal;
            pal.rate_k = rate_k;
            pal.start_offset = palette_offset;
            pal.direction = palette_direction;
            return render_one(s, vp, pal, banana_radius, max_iter, workers, out_path);
        }

        if (mesh->parsed()) {
            hc::SchlafliSymbol s = hc::parse(symbol_text);
            hc::EdgeSet edges = hc::enumerate_edges(s, min_len, max_depth);
            if (!edges_path.empty()) {
                std::ofstream f(edges_path);
                hc::write_edges_text(f, edges);
            }
            hc::ThicknessPolicy policy;
            double min_diam_model = min_diam_mm / scale_mm;
            if (policy_text == "accurate") policy = hc::ThicknessPolicy::accurate(r0);
            else if (policy_text == "clamped")
                policy = hc::ThicknessPolicy::accurate_clamped(r0, min_diam_model);
            else policy = hc::ThicknessPolicy::constant_euclidean(min_diam_model / 2.0);

            bool hyperideal_vertices = hc::vertex_type(s) == hc::ElementType::Hyperideal;
            if (!no_cull && !hyperideal_vertices) {
                edges = hc::cull(edges, min_diam_model, policy);
            } else if (!no_cull) {
                // Clipped hyperideal edges never share endpoints, so the
                // dangling-edge stage would delete everything; apply only the
                // thickness stage.
                hc::EdgeSet kept;
                for (std::size_t i = 0; i < edges.edges().size(); ++i)
                    if (hc::edge_max_tube_diameter(edges.edges()[i], policy) >= min_diam_model)
                        kept.insert(edges.edges()[i], edges.depths()[i]);
                edges = std::move(kept);
            }
            if (edges.empty()) {
                std::cerr << "no edges survive the thresholds\n";
                return kExitCompute;
            }
            hc::Mesh combined;
            for (std::size_t i : edges.sorted_order()) {
                hc::Edge e = hc::clip_edge_to_ball(edges.edges()[i]);
                combined.append(hc::cyclide_tube(e, policy, rings, around));
            }
            if (!stl_path.empty()) {
                auto bytes = hc::export_stl(combined, scale_mm);
                std::ofstream f(stl_path, std::ios::binary);
                f.write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
            }
            if (!obj_path.empty()) {
                std::ofstream f(obj_path);
                f << hc::export_obj(combined);
            }
            std::cout << "edges: " << edges.size() << ", triangles: " << combined.triangles.size()
                      << '\n';
            return kExitOk;
        }

        if (table->parsed()) {
            int w, h;
            if (!parse_resolution(res_text, w, h)) {
                std::cerr << "bad --res value: " << res_text << '\n';
                return kExitUsage;
            }
            if (term_list.empty()) {
                std::cerr << "empty --terms range\n";
                return kExitUsage;
            }
            // Pattern: three slots, each a literal term or a letter variable.
            std::string cleaned;
            for (char c : grid_text)
                if (!std::isspace(static_cast<unsigned char>(c)) && c != '{' && c != '}')
                    cleaned.push_back(c);
            std::vector<std::string> slots;
            std::stringstream ss(cleaned);
            std::string part;
            while (std::getline(ss, part, ',')) slots.push_back(part);
            if (slots.size() != 3) {
                std::cerr << "grid pattern must have three comma-separated slots\n";
                return kExitUsage;
            }
            auto is_var = [](const std::string& t) {
                return t.size() == 1 && std::isalpha(static_cast<unsigned char>(t[0])) &&
                       t != "i";
            };
            std::vector<int> var_slots;
            for (int i = 0; i < 3; ++i)
                if (is_var(slots[i])) var_slots.push_back(i);
            std::filesystem::create_directories(out_dir);
            std::ofstream manifest(out_dir + "/manifest.txt");
            std::size_t n_failed = 0, n_done = 0;

            std::vector<std::vector<std::string>> assignments;
            if (var_slots.empty()) {
                assignments.push_back({});
            } else if (var_slots.size() == 1) {
                for (const auto& t : term_list) assignments.push_back({t});
            } else if (var_slots.size() == 2) {
                for (const auto& t1 : term_list)
                    for (const auto& t2 : term_list) assignments.push_back({t1, t2});
            } else {
                for (const auto& t1 : term_list)
                    for (const auto& t2 : term_list)
                        for (const auto& t3 : term_list) assignments.push_back({t1, t2, t3});
            }

            for (const auto& asg : assignments) {
                std::vector<std::string> terms = slots;
                for (std::size_t k = 0; k < var_slots.size(); ++k) terms[var_slots[k]] = asg[k];
                std::string text = terms[0] + "," + terms[1] + "," + terms[2];
                hc::SchlafliSymbol s;
                try {
                    s = hc::parse(text);
                } catch (const hc::Error& err) {
                    manifest << text << " invalid: " << err.what() << '\n';
                    ++n_failed;
                    continue;
                }
                std::string name = hc::file_tag(s) + ".png";
                std::string path = out_dir + "/" + name;
                hc::Geometry g = hc::classify_3d(s);
                if (g != hc::Geometry::Hyperbolic) {
                    hc::Image ph(w, h);
                    std::fill(ph.rgb.begin(), ph.rgb.end(), static_cast<std::uint8_t>(128));
                    hc::write_png(path, ph);
                    manifest << hc::file_tag(s) << ' ' << hc::to_string(g) << " placeholder "
                             << name << '\n';
                    continue;
                }
                try {
                    hc::Simplex sx = hc::build_simplex(s);
                    hc::Viewport vp = make_viewport(sx, {}, "auto", w, h);
                    hc::Palette pal;
                    pal.rate_k = rate_k;
                    hc::Image img =
                        hc::render(s, vp, pal, hc::kDefaultBananaRadius, max_iter, workers);
                    hc::write_png(path, img);
                    manifest << hc::file_tag(s) << " hyperbolic rendered " << name << '\n';
                    ++n_done;
                } catch (const hc::Error& err) {
                    manifest << hc::file_tag(s) << " failed: " << err.what() << '\n';
                    ++n_failed;
                }
            }
            std::cout << "rendered " << n_done << " images into " << out_dir
                      << (n_failed ? " with failures" : "") << '\n';
            return n_failed ? kExitCompute : kExitOk;
        }
    } catch (const hc::MalformedSymbol& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hc::TermOutOfRange& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCompute;
    }
    return kExitUsage;
}
