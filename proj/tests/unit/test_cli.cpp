#include <sstream>
#include <string>
#include <vector>

#include "dc/io.hpp"
#include "doctest.h"
#include "fixture_path.hpp"
#include "json.hpp"

using namespace dc;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("encode prints the kb for each requested profile") {
    Run r = run({"encode", "--profile", "dcs", fixture("fig1.cm.json")});
    CHECK(r.code == 0);
    CHECK(r.out == read_text_file(fixture("fig1.dcs.kb")));
}

TEST_CASE("validate accepts the flagship fixture") {
    Run r = run({"validate", "--model", fixture("fig1.cm.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid") != std::string::npos);
}

TEST_CASE("validate rejects a broken model with exit code 1") {
    std::string path = "/tmp/dcc_broken_model.json";
    write_text_file(path, R"({"formatVersion":"1.0.0","family":"UML",
        "relationships":[{"roles":[{"place":"1","player":"Ghost"},
                                   {"place":"2","player":"Ghost"}]}]})");
    Run r = run({"validate", "--model", path});
    CHECK(r.code == 1);
    CHECK(r.out.find("invalid") != std::string::npos);
}

TEST_CASE("validate checks kb grammar membership") {
    Run r = run({"validate", "--kb", fixture("fig1.dcs.kb"), "--profile", "dcs"});
    CHECK(r.code == 0);
    r = run({"validate", "--kb", fixture("fig1.kb"), "--profile", "dcs"});
    CHECK(r.code == 1); // the uml encoding uses relation inclusions
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"encode", fixture("fig1.cm.json")}).code == 2); // missing --profile
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"encode", "--profile", "dcs", "/nonexistent.json"}).code == 2);
}

TEST_CASE("convert emits a valid model of the target family") {
    Run r = run({"convert", "--to", "eer", fixture("fig1.cm.json")});
    CHECK(r.code == 0);
    ConceptualModel m = model_from_json_text(r.out);
    CHECK(m.family == Family::EER);
    CHECK(validate_model(m).empty());
}

TEST_CASE("reason answers subsumption queries with matching exit codes") {
    Run yes = run({"reason", "--kb", fixture("fig1.dcs.kb"), "--subsumes", "Scientist",
                   "Person"});
    CHECK(yes.code == 0);
    CHECK(yes.out.find("true") != std::string::npos);
    Run no = run({"reason", "--kb", fixture("fig1.dcs.kb"), "--subsumes", "Person",
                  "Scientist"});
    CHECK(no.code == 1);
    CHECK(no.out.find("false") != std::string::npos);
}

TEST_CASE("reason --classify lists subsumptions") {
    Run r = run({"reason", "--kb", fixture("fig1.dcs.kb"), "--classify", "--bound", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Scientist <= Person") != std::string::npos);
}

TEST_CASE("roundtrip reports the bijection") {
    Run r = run({"roundtrip", fixture("fig1.cm.json"), "--to", "orm"});
    CHECK(r.code == 0);
    CHECK(r.out.find("equal modulo renaming") != std::string::npos);
}

TEST_CASE("--json wraps results in a machine-readable report") {
    Run r = run({"--json", "reason", "--kb", fixture("fig1.dcs.kb"), "--subsumes",
                 "Scientist", "Person"});
    CHECK(r.code == 0);
    nlohmann::json report = nlohmann::json::parse(r.out);
    CHECK(report["command"] == "reason");
    CHECK(report["results"][0]["verdict"] == "true");
}

TEST_CASE("json validation reports violations") {
    std::string path = "/tmp/dcc_broken_model.json";
    write_text_file(path, R"({"formatVersion":"1.0.0","family":"UML",
        "relationships":[{"roles":[{"place":"1","player":"Ghost"},
                                   {"place":"2","player":"Ghost"}]}]})");
    Run r = run({"--json", "validate", "--model", path});
    CHECK(r.code == 1);
    nlohmann::json report = nlohmann::json::parse(r.out);
    CHECK_FALSE(report["violations"].empty());
}
