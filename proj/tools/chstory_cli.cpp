// Offline checks for datasets and story files.

#include "chstory/story/codec.hpp"
#include "chstory/story/editor.hpp"
#include "chstory/store/codec.hpp"
#include "chstory/store/store.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw chstory::Error(chstory::ErrorCode::NotFound, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_error(const chstory::Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what();
    if (!e.path().empty()) std::cerr << " at " << e.path();
    std::cerr << "\n";
    for (const auto& d : e.details()) std::cerr << "  " << d.path << " " << to_string(d.code) << ": " << d.message << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dataset and story utilities"};
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "Load datasets and print the ingest report");
    std::vector<std::string> datasets;
    bool lenient = false;
    ingest->add_option("files", datasets, "Dataset files")->required()->expected(1, -1);
    ingest->add_flag("--lenient", lenient, "Keep valid records and report the rest");

    auto* validate = app.add_subcommand("validate-story", "Check an exported story file");
    std::string story_file;
    validate->add_option("file", story_file, "Story file")->required();

    auto* canonical = app.add_subcommand("canonicalize", "Print a story file in canonical form");
    std::string canonical_file;
    canonical->add_option("file", canonical_file, "Story file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            chstory::Store store;
            int status = 0;
            for (const auto& file : datasets) {
                auto report = store.ingest_dataset(slurp(file), lenient ? chstory::IngestMode::lenient
                                                                        : chstory::IngestMode::strict);
                std::cout << chstory::to_json(report).dump(2) << "\n";
                if (!report.errors.empty()) status = 2;
            }
            return status;
        }
        if (*validate) {
            auto doc = chstory::story::parse_story(slurp(story_file));
            auto issues = chstory::story::validate_story(doc);
            auto shapes = chstory::story::shape_issues(doc);
            issues.insert(issues.end(), shapes.begin(), shapes.end());
            for (const auto& i : issues) std::cout << i.path << " " << to_string(i.code) << ": " << i.message << "\n";
            for (const auto& w : chstory::story::story_warnings(doc))
                std::cout << w.path << " " << w.code << ": " << w.message << "\n";
            return issues.empty() ? 0 : 2;
        }
        if (*canonical) {
            std::cout << chstory::story::export_story(chstory::story::parse_story(slurp(canonical_file)));
            return 0;
        }
    } catch (const chstory::Error& e) {
        print_error(e);
        return 1;
    }
    return 0;
}
