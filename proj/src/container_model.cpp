#include <json.hpp>

#include "pfg/cutshortcut.hpp"

namespace pfg::csc {

namespace {

using nlohmann::json;

Category parseCategory(const json& v) {
    if (!v.is_string()) throw Error(ErrorKind::Model, "category must be a string");
    const auto s = v.get<std::string>();
    if (s == "COL_VALUE") return Category::ColValue;
    if (s == "MAP_KEY") return Category::MapKey;
    if (s == "MAP_VALUE") return Category::MapValue;
    throw Error(ErrorKind::Model, "unknown category '" + s + "'");
}

const ir::MethodDef& requireMethod(const ir::Program& program, const std::string& name) {
    const ir::MethodDef* m = program.findMethod(name);
    if (!m) throw Error(ErrorKind::Model, "container model names unknown method '" + name + "'");
    if (m->isStatic) throw Error(ErrorKind::Model, "container method '" + name + "' must be an instance method");
    return *m;
}

std::string requireString(const json& obj, const char* key, const char* ctx) {
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
        throw Error(ErrorKind::Model, std::string(ctx) + " entry needs a string '" + key + "'");
    }
    return obj[key].get<std::string>();
}

std::set<std::string> stringSet(const json& doc, const char* key) {
    std::set<std::string> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) throw Error(ErrorKind::Model, std::string("'") + key + "' must be an array");
    for (const auto& v : doc[key]) {
        if (!v.is_string()) throw Error(ErrorKind::Model, std::string("'") + key + "' must hold strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

}  // namespace

std::string_view categoryName(Category c) {
    switch (c) {
        case Category::ColValue: return "COL_VALUE";
        case Category::MapKey: return "MAP_KEY";
        case Category::MapValue: return "MAP_VALUE";
    }
    return "?";
}

ContainerModel loadContainerModel(std::string_view text, const ir::Program& program) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Model, std::string("malformed container model: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Model, "container model must be a JSON object");
    static const std::set<std::string> known = {"entrances", "exits", "transfers", "collectionRoots", "mapRoots"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.count(key)) throw Error(ErrorKind::Model, "unknown container model key '" + key + "'");
    }

    ContainerModel model;
    if (doc.contains("entrances")) {
        if (!doc["entrances"].is_array()) throw Error(ErrorKind::Model, "'entrances' must be an array");
        for (const auto& e : doc["entrances"]) {
            Entrance en;
            en.method = requireString(e, "method", "entrance");
            if (!e.contains("param") || !e["param"].is_number_integer()) {
                throw Error(ErrorKind::Model, "entrance '" + en.method + "' needs an integer 'param'");
            }
            en.param = e["param"].get<int>();
            if (!e.contains("category")) throw Error(ErrorKind::Model, "entrance '" + en.method + "' needs a category");
            en.category = parseCategory(e["category"]);
            const auto& m = requireMethod(program, en.method);
            if (en.param < 1 || en.param > m.arity()) {
                throw Error(ErrorKind::Model, "entrance '" + en.method + "' param " + std::to_string(en.param) +
                                                  " outside 1.." + std::to_string(m.arity()));
            }
            model.entrances.push_back(std::move(en));
        }
    }
    if (doc.contains("exits")) {
        if (!doc["exits"].is_array()) throw Error(ErrorKind::Model, "'exits' must be an array");
        for (const auto& e : doc["exits"]) {
            Exit ex;
            ex.method = requireString(e, "method", "exit");
            if (!e.contains("category")) throw Error(ErrorKind::Model, "exit '" + ex.method + "' needs a category");
            ex.category = parseCategory(e["category"]);
            const auto& m = requireMethod(program, ex.method);
            if (!m.retVar) throw Error(ErrorKind::Model, "exit '" + ex.method + "' returns nothing");
            model.exits.push_back(std::move(ex));
        }
    }
    model.transfers = stringSet(doc, "transfers");
    for (const auto& t : model.transfers) requireMethod(program, t);
    model.collectionRoots = stringSet(doc, "collectionRoots");
    model.mapRoots = stringSet(doc, "mapRoots");
    for (const auto* roots : {&model.collectionRoots, &model.mapRoots}) {
        for (const auto& r : *roots) {
            if (!program.findClass(r)) throw Error(ErrorKind::Model, "unknown container root type '" + r + "'");
        }
    }

    // Completeness of the classification is the model author's job; flag gaps.
    std::set<std::string> classified = model.transfers;
    for (const auto& e : model.entrances) classified.insert(e.method);
    for (const auto& e : model.exits) classified.insert(e.method);
    for (const auto& cls : program.classes) {
        bool container = false;
        for (const auto* roots : {&model.collectionRoots, &model.mapRoots}) {
            for (const auto& r : *roots) container = container || ir::subtypeOf(program, cls.name, r);
        }
        if (!container) continue;
        for (const auto& m : cls.methods) {
            const std::string q = cls.name + "." + m.name;
            if (m.name != "init" && !classified.count(q)) {
                model.warnings.push_back("container method " + q + " is not classified as entrance, exit or transfer");
            }
        }
    }
    return model;
}

unsigned parsePatterns(std::string_view text) {
    if (text == "all") return kAllPatterns;
    if (text == "none" || text.empty()) return 0;
    unsigned out = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto word = text.substr(start, end - start);
        if (word == "field") out |= kFieldPattern;
        else if (word == "container") out |= kContainerPattern;
        else if (word == "local") out |= kLocalFlowPattern;
        else throw Error(ErrorKind::Usage, "unknown pattern '" + std::string(word) + "'");
        start = end + 1;
    }
    return out;
}

std::string cutTagNames(unsigned tags) {
    std::string out;
    auto add = [&out](const char* s) {
        if (!out.empty()) out += "+";
        out += s;
    };
    if (tags & kTagFieldLoad) add("CUTPROPLOAD");
    if (tags & kTagContainer) add("CUTCONTAINER");
    if (tags & kTagLocalFlow) add("CUTLFLOW");
    return out;
}

}  // namespace pfg::csc
