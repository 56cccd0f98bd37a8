#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dc/encode.hpp"
#include "dc/io.hpp"
#include "dc/reasoner.hpp"
#include "dc/render.hpp"
#include "dc/semantics.hpp"

namespace dc {

namespace {

using nlohmann::json;

Family family_arg(const std::string &s) {
    std::string up = s;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    auto f = family_from_name(up);
    if (!f) throw Error(ErrorCode::InvalidArgument, "unknown family '" + s + "'");
    return *f;
}

KnowledgeBase encode_as(const ConceptualModel &m, const std::string &profile,
                        bool reify_ternaries) {
    if (profile == "dcp") return encode_dcp(m);
    if (profile == "dcs") return encode_dcs(m);
    if (profile == "dcuml") return encode_uml(m);
    if (profile == "dceer") return encode_eer(m, reify_ternaries);
    if (profile == "dcorm") return encode_orm(m);
    throw Error(ErrorCode::InvalidArgument, "unknown profile '" + profile + "'");
}

void emit(std::ostream &out, const std::string &text, const std::string &output_path) {
    if (output_path.empty()) out << text;
    else write_text_file(output_path, text);
}

} // namespace

int cli_run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"conceptual model profiles: encode, validate, convert, reason, roundtrip",
                 "dcc"};
    app.require_subcommand(1);
    bool json_report = false;
    app.add_flag("--json", json_report, "machine-readable reports");

    // encode
    auto *enc = app.add_subcommand("encode", "encode a model file into a profile kb");
    std::string enc_profile, enc_in, enc_out;
    bool enc_reify = false;
    enc->add_option("--profile", enc_profile, "target profile")
        ->required()
        ->check(CLI::IsMember({"dcp", "dcs", "dcuml", "dceer", "dcorm"}));
    enc->add_option("input", enc_in, "model JSON file")->required();
    enc->add_option("-o,--output", enc_out, "kb output file (default: stdout)");
    enc->add_flag("--reify-ternaries", enc_reify, "reify ternaries (dceer only)");

    // validate
    auto *val = app.add_subcommand("validate", "validate a model file or a kb file");
    std::string val_model, val_kb, val_profile;
    val->add_option("--model", val_model, "model JSON file");
    val->add_option("--kb", val_kb, "kb text file");
    val->add_option("--profile", val_profile, "profile to check the kb against")
        ->check(CLI::IsMember({"dcp", "dcs", "dcuml", "dceer", "dcorm"}));

    // convert
    auto *conv = app.add_subcommand("convert", "encode to dcs and render to another family");
    std::string conv_to, conv_in, conv_out;
    conv->add_option("--to", conv_to, "target family")
        ->required()
        ->check(CLI::IsMember({"uml", "eer", "orm"}));
    conv->add_option("input", conv_in, "model JSON file")->required();
    conv->add_option("-o,--output", conv_out, "model output file (default: stdout)");

    // reason
    auto *rsn = app.add_subcommand("reason", "subsumption / classification queries");
    std::string rsn_kb;
    std::vector<std::string> rsn_subsumes;
    bool rsn_classify = false;
    unsigned rsn_bound = 0;
    rsn->add_option("--kb", rsn_kb, "kb text file")->required();
    rsn->add_option("--subsumes", rsn_subsumes, "query: SUB SUPER")->expected(2);
    rsn->add_flag("--classify", rsn_classify, "full pairwise classification");
    rsn->add_option("--bound", rsn_bound, "countermodel domain bound (default: heuristic)");

    // roundtrip
    auto *rt = app.add_subcommand("roundtrip", "encode, render to a family, re-encode, compare");
    std::string rt_in, rt_via = "dcs", rt_to;
    rt->add_option("input", rt_in, "model JSON file")->required();
    rt->add_option("--via", rt_via, "intermediate profile (dcs)")
        ->check(CLI::IsMember({"dcs"}));
    rt->add_option("--to", rt_to, "family to render to")
        ->required()
        ->check(CLI::IsMember({"uml", "eer", "orm"}));

    std::vector<const char *> argv;
    argv.push_back("dcc");
    for (const std::string &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (enc->parsed()) {
            ConceptualModel m = read_model(enc_in);
            KnowledgeBase kb = encode_as(m, enc_profile, enc_reify);
            std::string text = serialize_kb_text(kb);
            if (json_report) {
                json rep{{"command", "encode"},
                         {"inputs", json::array({enc_in})},
                         {"results", json::array({json{{"profile", profile_name(kb.profile)},
                                                       {"axioms", kb.axioms.size()}}})}};
                if (enc_out.empty()) rep["kb"] = text;
                else write_text_file(enc_out, text);
                out << rep.dump(2) << "\n";
            } else {
                emit(out, text, enc_out);
            }
            return 0;
        }

        if (val->parsed()) {
            if (val_model.empty() == val_kb.empty()) {
                err << "validate needs exactly one of --model or --kb\n";
                return 2;
            }
            json violations = json::array();
            json lints = json::array();
            if (!val_model.empty()) {
                ConceptualModel m = read_model(val_model);
                for (const Violation &v : validate_model(m))
                    violations.push_back(
                        json{{"path", v.path}, {"rule", v.rule_id}, {"detail", v.detail}});
            } else {
                if (val_profile.empty()) {
                    err << "validating a kb needs --profile\n";
                    return 2;
                }
                KnowledgeBase kb = parse_kb_text(read_text_file(val_kb));
                MembershipReport rep = check_profile(kb, *profile_from_name(val_profile));
                for (const auto &[where, why] : rep.violations)
                    violations.push_back(json{{"axiom", where}, {"reason", why}});
                for (const auto &[where, why] : rep.lints)
                    lints.push_back(json{{"axiom", where}, {"reason", why}});
            }
            if (json_report) {
                json rep{{"command", "validate"},
                         {"inputs", json::array({val_model.empty() ? val_kb : val_model})},
                         {"results", json::array({json{{"valid", violations.empty()}}})},
                         {"violations", violations}};
                if (!lints.empty()) rep["lints"] = lints;
                out << rep.dump(2) << "\n";
            } else {
                for (const auto &v : violations) {
                    if (v.contains("path"))
                        out << v["path"].get<std::string>() << ": "
                            << v["rule"].get<std::string>();
                    else
                        out << v["axiom"].get<std::string>() << ": "
                            << v["reason"].get<std::string>();
                    if (v.contains("detail") && !v["detail"].get<std::string>().empty())
                        out << " (" << v["detail"].get<std::string>() << ")";
                    out << "\n";
                }
                for (const auto &l : lints)
                    err << "lint: " << l["axiom"].get<std::string>() << ": "
                        << l["reason"].get<std::string>() << "\n";
                out << (violations.empty() ? "valid" : "invalid") << "\n";
            }
            return violations.empty() ? 0 : 1;
        }

        if (conv->parsed()) {
            ConceptualModel m = read_model(conv_in);
            ConceptualModel rendered = render_model(encode_dcs(m), family_arg(conv_to));
            std::string text = model_to_json_text(rendered);
            if (json_report) {
                json rep{{"command", "convert"},
                         {"inputs", json::array({conv_in})},
                         {"results",
                          json::array({json{{"family", family_name(rendered.family)}}})}};
                if (conv_out.empty()) rep["model"] = json::parse(text);
                else write_text_file(conv_out, text);
                out << rep.dump(2) << "\n";
            } else {
                emit(out, text, conv_out);
            }
            return 0;
        }

        if (rsn->parsed()) {
            KnowledgeBase kb = parse_kb_text(read_text_file(rsn_kb));
            unsigned bound = rsn_bound > 0 ? rsn_bound : default_bound(kb);
            if (rsn_subsumes.empty() == !rsn_classify) {
                err << "reason needs exactly one of --subsumes or --classify\n";
                return 2;
            }
            if (!rsn_subsumes.empty()) {
                const std::string &sub = rsn_subsumes[0], &super = rsn_subsumes[1];
                bool holds = subsumes_structural(kb, sub, super);
                std::string verdict = "true";
                std::string witness;
                if (!holds) {
                    SubsumptionQuery q{&kb, sub, super};
                    if (auto cm = find_countermodel(q, bound)) {
                        verdict = "false";
                        witness = cm->witness;
                    } else {
                        verdict = "unknown";
                    }
                }
                if (json_report) {
                    json res{{"sub", sub}, {"super", super}, {"verdict", verdict}};
                    if (!witness.empty()) res["witness"] = witness;
                    out << json{{"command", "reason"},
                                {"inputs", json::array({rsn_kb})},
                                {"results", json::array({res})},
                                {"bound", bound}}
                               .dump(2)
                        << "\n";
                } else {
                    out << verdict;
                    if (verdict == "false") out << " (countermodel witness " << witness << ")";
                    if (verdict == "unknown") out << " at bound " << bound;
                    out << "\n";
                }
                return holds ? 0 : 1;
            }
            ClassificationResult cls = classify(kb, bound);
            if (json_report) {
                json pairs = json::array();
                for (const auto &[pair, verdict] : cls.verdicts) {
                    const char *v = verdict == PairVerdict::Subsumed ? "subsumed"
                                    : verdict == PairVerdict::RefutedWithWitness
                                        ? "false-with-witness"
                                        : "unknown-at-bound";
                    pairs.push_back(
                        json{{"sub", pair.first}, {"super", pair.second}, {"verdict", v}});
                }
                json classes = json::array();
                for (const auto &cl : cls.equivalence_classes) classes.push_back(cl);
                out << json{{"command", "reason"},
                            {"inputs", json::array({rsn_kb})},
                            {"results", pairs},
                            {"equivalenceClasses", classes},
                            {"bound", bound}}
                           .dump(2)
                    << "\n";
            } else {
                out << "bound " << bound << "\n";
                for (const auto &[pair, verdict] : cls.verdicts) {
                    if (pair.first == pair.second) continue;
                    if (verdict == PairVerdict::Subsumed)
                        out << pair.first << " <= " << pair.second << "\n";
                    else if (verdict == PairVerdict::UnknownAtBound)
                        out << pair.first << " <= " << pair.second << " unknown-at-bound\n";
                }
                for (const auto &cl : cls.equivalence_classes)
                    if (cl.size() > 1) {
                        out << "equivalent:";
                        for (const std::string &c : cl) out << " " << c;
                        out << "\n";
                    }
            }
            return 0;
        }

        if (rt->parsed()) {
            ConceptualModel m = read_model(rt_in);
            KnowledgeBase kb1 = encode_dcs(m);
            ConceptualModel rendered = render_model(kb1, family_arg(rt_to));
            KnowledgeBase kb2 = encode_dcs(rendered);
            auto bijection = kb_equal_modulo_renaming(kb1, kb2);
            if (json_report) {
                json rep{{"command", "roundtrip"},
                         {"inputs", json::array({rt_in})},
                         {"results", json::array({json{{"equal", bijection.has_value()}}})}};
                if (bijection) {
                    json mapping = json::object();
                    for (const auto &[a, b] : bijection->mapping) mapping[a] = b;
                    rep["mapping"] = mapping;
                } else {
                    rep["kb1"] = serialize_kb_text(kb1);
                    rep["kb2"] = serialize_kb_text(kb2);
                }
                out << rep.dump(2) << "\n";
            } else if (bijection) {
                out << "equal modulo renaming\n";
                for (const auto &[a, b] : bijection->mapping)
                    if (a != b) out << a << " -> " << b << "\n";
            } else {
                out << "NOT equal modulo renaming\n";
                std::istringstream a(serialize_kb_text(kb1)), b(serialize_kb_text(kb2));
                std::set<std::string> la, lb;
                std::string line;
                while (std::getline(a, line)) la.insert(line);
                while (std::getline(b, line)) lb.insert(line);
                for (const std::string &l : la)
                    if (!lb.count(l)) out << "- " << l << "\n";
                for (const std::string &l : lb)
                    if (!la.count(l)) out << "+ " << l << "\n";
            }
            return bijection ? 0 : 1;
        }
    } catch (const Error &e) {
        err << error_code_name(e.code()) << ": " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace dc
