// SPDX-License-Identifier: Apache-2.0
#include "crag/kg/store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "crag/common/text.hpp"

namespace crag::kg {
namespace {

using nlohmann::json;

std::string row_name(std::string_view table, std::size_t i) {
    return std::string(table) + "[" + std::to_string(i) + "]";
}

bool valid_calendar_date(std::string_view s) {
    if (s.size() != 10 || !text::is_date_like(s)) return false;
    int y = std::stoi(std::string(s.substr(0, 4)));
    unsigned m = static_cast<unsigned>(std::stoi(std::string(s.substr(5, 2))));
    unsigned d = static_cast<unsigned>(std::stoi(std::string(s.substr(8, 2))));
    return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                       std::chrono::day{d}}
        .ok();
}

std::int64_t current_year() {
    auto now = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
    return static_cast<int>(std::chrono::year_month_day{now}.year());
}

// Field readers for the fixture layout. Missing optional fields take the
// type's default; present fields of the wrong type are load errors.
class FieldReader {
public:
    FieldReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (!obj_.is_object()) throw LoadError(where_, "expected an object");
    }

    std::string string(const char* key, bool required = false) const {
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) {
            if (required) throw LoadError(path(key), "missing required string");
            return {};
        }
        if (!it->is_string()) throw LoadError(path(key), "expected string");
        return it->get<std::string>();
    }

    std::optional<std::int64_t> integer(const char* key) const {
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return std::nullopt;
        if (it->is_number_integer()) return it->get<std::int64_t>();
        if (it->is_string()) {
            auto n = text::parse_number(it->get<std::string>());
            if (n && *n == static_cast<double>(static_cast<std::int64_t>(*n)))
                return static_cast<std::int64_t>(*n);
        }
        throw LoadError(path(key), "expected integer");
    }

    std::optional<double> number(const char* key) const {
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return std::nullopt;
        if (it->is_number()) return it->get<double>();
        throw LoadError(path(key), "expected number");
    }

    bool boolean(const char* key) const {
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return false;
        if (it->is_boolean()) return it->get<bool>();
        if (it->is_string()) {
            auto s = text::normalize_key(it->get<std::string>());
            if (s == "true") return true;
            if (s == "false") return false;
        }
        throw LoadError(path(key), "expected boolean");
    }

    StringList strings(const char* key) const {
        auto it = obj_.find(key);
        if (it == obj_.end() || it->is_null()) return {};
        if (!it->is_array()) throw LoadError(path(key), "expected array of strings");
        StringList out;
        for (const auto& e : *it) {
            if (!e.is_string()) throw LoadError(path(key), "expected array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    /// Every field not in `known`, kept as a generic attribute.
    Record extras(std::initializer_list<std::string_view> known) const {
        Record out;
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (std::find(known.begin(), known.end(), it.key()) != known.end()) continue;
            auto v = value_from_json(it.value());
            if (!v) throw LoadError(path(it.key().c_str()), "nested objects are not supported");
            out.emplace(it.key(), std::move(*v));
        }
        return out;
    }

private:
    std::string path(const char* key) const { return where_ + "." + key; }

    const json& obj_;
    std::string where_;
};

const json& table(const json& doc, const char* name) {
    static const json empty = json::array();
    auto it = doc.find(name);
    if (it == doc.end()) return empty;
    if (!it->is_array()) throw LoadError(name, "expected an array");
    return *it;
}

// Links a cast/crew row to its movie. A row year, when given, disambiguates
// titles shared across years; otherwise the title must be unique.
std::size_t link_movie(const KgDatabase& db, const std::string& title, std::int64_t& year,
                       const std::string& row) {
    auto hits = db.find_movies(title);
    if (hits.empty()) throw IntegrityError(row, "unknown movie '" + title + "'");
    if (year != 0) {
        for (auto i : hits)
            if (db.movies()[i].year == year) return i;
        throw IntegrityError(row, "movie '" + title + "' has no release in " + std::to_string(year));
    }
    if (hits.size() > 1) throw IntegrityError(row, "ambiguous movie '" + title + "', give a year");
    year = db.movies()[hits.front()].year;
    return hits.front();
}

json oscar_json(const OscarRow& o) {
    return json{{"year", o.year},
                {"category", o.category},
                {"name", o.name},
                {"movie", o.movie},
                {"winner", o.winner}};
}

}  // namespace

const PersonRow* KgDatabase::find_person(std::string_view name) const {
    auto it = person_index_.find(text::normalize_key(name));
    return it == person_index_.end() ? nullptr : &persons_[it->second];
}

std::vector<std::size_t> KgDatabase::find_movies(std::string_view title) const {
    auto it = movie_index_.find(text::normalize_key(title));
    return it == movie_index_.end() ? std::vector<std::size_t>{} : it->second;
}

KgDatabase KgDatabase::from_tables(std::vector<PersonRow> persons, std::vector<MovieRow> movies,
                                   std::vector<CastRow> cast, std::vector<CrewRow> crew,
                                   std::vector<OscarRow> oscar) {
    KgDatabase db;
    db.persons_ = std::move(persons);
    db.movies_ = std::move(movies);

    for (std::size_t i = 0; i < db.persons_.size(); ++i) {
        auto& p = db.persons_[i];
        auto row = row_name("persons", i);
        if (text::trim(p.name).empty()) throw IntegrityError(row, "empty name");
        if (!p.birthday.empty() && !valid_calendar_date(p.birthday))
            throw IntegrityError(row, "birthday '" + p.birthday + "' is not a calendar date");
        p.acted_movies.clear();
        p.directed_movies.clear();
        p.oscar_awards.clear();
        if (!db.person_index_.emplace(text::normalize_key(p.name), i).second)
            throw IntegrityError(row, "duplicate person '" + p.name + "'");
    }

    std::set<std::pair<std::string, std::int64_t>> title_years;
    for (std::size_t i = 0; i < db.movies_.size(); ++i) {
        auto& m = db.movies_[i];
        auto row = row_name("movies", i);
        if (text::trim(m.title).empty()) throw IntegrityError(row, "empty title");
        if (!m.release_date.empty()) {
            if (!valid_calendar_date(m.release_date))
                throw IntegrityError(row, "release_date '" + m.release_date + "' is not a calendar date");
            auto release_year = std::stoll(m.release_date.substr(0, 4));
            if (m.year == 0) m.year = release_year;
            if (m.year != release_year)
                throw IntegrityError(row, "year does not match release_date");
        }
        if (m.budget < 0 || m.revenue < 0) throw IntegrityError(row, "negative budget or revenue");
        if (m.rating < 0.0 || m.rating > 10.0) throw IntegrityError(row, "rating outside [0, 10]");
        if (!title_years.emplace(text::normalize_key(m.title), m.year).second)
            throw IntegrityError(row, "duplicate title '" + m.title + "' in " + std::to_string(m.year));
        m.oscar_awards.clear();
        m.cast.clear();
        m.crew.clear();
        db.movie_index_[text::normalize_key(m.title)].push_back(i);
    }

    db.cast_ = std::move(cast);
    for (std::size_t i = 0; i < db.cast_.size(); ++i) {
        auto& c = db.cast_[i];
        auto row = row_name("cast", i);
        if (text::trim(c.character).empty()) throw IntegrityError(row, "empty character");
        c.movie = link_movie(db, c.movie_name, c.year, row);
        auto pit = db.person_index_.find(text::normalize_key(c.name));
        if (pit == db.person_index_.end()) throw IntegrityError(row, "unknown person '" + c.name + "'");
        db.movies_[c.movie].cast.push_back(i);
        auto& acted = db.persons_[pit->second].acted_movies;
        const auto& title = db.movies_[c.movie].title;
        if (std::find(acted.begin(), acted.end(), title) == acted.end()) acted.push_back(title);
    }

    db.crew_ = std::move(crew);
    for (std::size_t i = 0; i < db.crew_.size(); ++i) {
        auto& c = db.crew_[i];
        auto row = row_name("crew", i);
        if (text::trim(c.job).empty()) throw IntegrityError(row, "empty job");
        c.movie = link_movie(db, c.movie_name, c.year, row);
        auto pit = db.person_index_.find(text::normalize_key(c.name));
        if (pit == db.person_index_.end()) throw IntegrityError(row, "unknown person '" + c.name + "'");
        db.movies_[c.movie].crew.push_back(i);
        if (text::normalize_key(c.job) == "director") {
            auto& directed = db.persons_[pit->second].directed_movies;
            const auto& title = db.movies_[c.movie].title;
            if (std::find(directed.begin(), directed.end(), title) == directed.end())
                directed.push_back(title);
        }
    }

    db.oscar_ = std::move(oscar);
    const auto max_year = current_year();
    for (std::size_t i = 0; i < db.oscar_.size(); ++i) {
        auto& o = db.oscar_[i];
        auto row = row_name("oscar", i);
        if (o.year < 1929 || o.year > max_year)
            throw IntegrityError(row, "ceremony year " + std::to_string(o.year) + " out of range");
        if (text::trim(o.category).empty()) throw IntegrityError(row, "empty category");
        auto hits = db.find_movies(o.movie);
        if (hits.empty()) throw IntegrityError(row, "unknown movie '" + o.movie + "'");
        // Ceremonies follow the release; prefer the latest release not after
        // the ceremony when a title is shared.
        o.movie_index = hits.front();
        for (auto h : hits)
            if (db.movies_[h].year <= o.year) o.movie_index = h;
        db.movies_[o.movie_index].oscar_awards.push_back(i);
        if (!text::trim(o.name).empty()) {
            auto pit = db.person_index_.find(text::normalize_key(o.name));
            if (pit == db.person_index_.end())
                throw IntegrityError(row, "unknown person '" + o.name + "'");
            db.persons_[pit->second].oscar_awards.push_back(i);
        }
    }
    return db;
}

KgDatabase kg_from_json(const json& doc) {
    if (!doc.is_object()) throw LoadError("document", "expected a JSON object with five arrays");

    std::vector<PersonRow> persons;
    const auto& pj = table(doc, "persons");
    for (std::size_t i = 0; i < pj.size(); ++i) {
        FieldReader r(pj[i], row_name("persons", i));
        PersonRow p;
        p.name = r.string("name", true);
        p.birthday = r.string("birthday");
        p.attributes = r.extras({"name", "birthday", "acted_movies", "directed_movies", "oscar_awards"});
        persons.push_back(std::move(p));
    }

    std::vector<MovieRow> movies;
    const auto& mj = table(doc, "movies");
    for (std::size_t i = 0; i < mj.size(); ++i) {
        FieldReader r(mj[i], row_name("movies", i));
        MovieRow m;
        m.title = r.string("title", true);
        m.release_date = r.string("release_date");
        m.original_title = r.string("original_title");
        m.original_language = r.string("original_language");
        m.budget = r.integer("budget").value_or(0);
        m.revenue = r.integer("revenue").value_or(0);
        m.rating = r.number("rating").value_or(0.0);
        m.genres = r.strings("genres");
        m.year = r.integer("year").value_or(0);
        m.attributes = r.extras({"title", "release_date", "original_title", "original_language",
                                 "budget", "revenue", "rating", "genres", "year", "oscar_awards",
                                 "cast", "crew"});
        movies.push_back(std::move(m));
    }

    std::vector<CastRow> cast;
    const auto& cj = table(doc, "cast");
    for (std::size_t i = 0; i < cj.size(); ++i) {
        FieldReader r(cj[i], row_name("cast", i));
        cast.push_back(CastRow{r.string("movie_name", true), r.string("name", true),
                               r.string("character", true), r.integer("year").value_or(0), 0});
    }

    std::vector<CrewRow> crew;
    const auto& crj = table(doc, "crew");
    for (std::size_t i = 0; i < crj.size(); ++i) {
        FieldReader r(crj[i], row_name("crew", i));
        crew.push_back(CrewRow{r.string("movie_name", true), r.string("name", true),
                               r.string("job", true), r.integer("year").value_or(0), 0});
    }

    std::vector<OscarRow> oscar;
    const auto& oj = table(doc, "oscar");
    for (std::size_t i = 0; i < oj.size(); ++i) {
        FieldReader r(oj[i], row_name("oscar", i));
        auto year = r.integer("year");
        if (!year) throw LoadError(row_name("oscar", i) + ".year", "missing required integer");
        oscar.push_back(OscarRow{*year, r.string("category", true), r.string("name"),
                                 r.string("movie", true), r.boolean("winner"), 0});
    }

    return KgDatabase::from_tables(std::move(persons), std::move(movies), std::move(cast),
                                   std::move(crew), std::move(oscar));
}

KgDatabase parse_kg(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line number for the diagnostic.
        auto upto = std::min<std::size_t>(e.byte, json_text.size());
        auto line = 1 + std::count(json_text.begin(), json_text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw LoadError("line " + std::to_string(line), e.what());
    }
    return kg_from_json(doc);
}

KgDatabase load_kg(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_kg(ss.str());
}

// --- coarse API ------------------------------------------------------------

std::optional<CoarseCall> parse_coarse_call(std::string_view name) {
    if (name == "person_info" || name == "get_person_info") return CoarseCall::person_info;
    if (name == "movie_info" || name == "get_movie_info") return CoarseCall::movie_info;
    if (name == "year_info" || name == "get_year_info") return CoarseCall::year_info;
    return std::nullopt;
}

std::string_view to_string(CoarseCall call) {
    switch (call) {
        case CoarseCall::person_info: return "person_info";
        case CoarseCall::movie_info: return "movie_info";
        case CoarseCall::year_info: return "year_info";
    }
    return "";
}

CoarseApiResponse coarse_get(const KgDatabase& db, CoarseCall call, const CoarseKey& key) {
    CoarseApiResponse r;
    if (call == CoarseCall::year_info) {
        const auto* year = std::get_if<std::int64_t>(&key);
        if (!year) throw std::invalid_argument("year_info expects an integer key");
        auto movies = json::array();
        for (const auto& m : db.movies())
            if (m.year == *year) movies.push_back(m.title);
        auto awards = json::array();
        for (const auto& o : db.oscar())
            if (o.year == *year) awards.push_back(oscar_json(o));
        if (movies.empty() && awards.empty()) return r;
        r.found = true;
        r.payload = json{{"movie_list", std::move(movies)}, {"oscar_awards", std::move(awards)}};
        return r;
    }

    const auto* name = std::get_if<std::string>(&key);
    if (!name) throw std::invalid_argument(std::string(to_string(call)) + " expects a string key");

    if (call == CoarseCall::person_info) {
        const auto* p = db.find_person(*name);
        if (!p) return r;
        auto awards = json::array();
        for (auto i : p->oscar_awards) awards.push_back(oscar_json(db.oscar()[i]));
        r.found = true;
        r.payload = to_json(p->attributes);
        r.payload["name"] = p->name;
        r.payload["birthday"] = p->birthday;
        r.payload["acted_movies"] = p->acted_movies;
        r.payload["directed_movies"] = p->directed_movies;
        r.payload["oscar_awards"] = std::move(awards);
        return r;
    }

    auto hits = db.find_movies(*name);
    if (hits.empty()) return r;
    const auto& m = db.movies()[hits.front()];
    auto awards = json::array();
    for (auto i : m.oscar_awards) awards.push_back(oscar_json(db.oscar()[i]));
    auto cast = json::array();
    for (auto i : m.cast) {
        const auto& c = db.cast()[i];
        cast.push_back(json{{"name", c.name}, {"character", c.character}, {"year", c.year}});
    }
    auto crew = json::array();
    for (auto i : m.crew) {
        const auto& c = db.crew()[i];
        crew.push_back(json{{"name", c.name}, {"job", c.job}, {"year", c.year}});
    }
    r.found = true;
    r.payload = to_json(m.attributes);
    r.payload["title"] = m.title;
    r.payload["release_date"] = m.release_date;
    r.payload["original_title"] = m.original_title;
    r.payload["original_language"] = m.original_language;
    r.payload["budget"] = m.budget;
    r.payload["revenue"] = m.revenue;
    r.payload["rating"] = m.rating;
    r.payload["genres"] = m.genres;
    r.payload["year"] = m.year;
    r.payload["oscar_awards"] = std::move(awards);
    r.payload["cast"] = std::move(cast);
    r.payload["crew"] = std::move(crew);
    return r;
}

json to_json(const CoarseApiResponse& r) { return json{{"found", r.found}, {"payload", r.payload}}; }

// --- resolve_entity -------------------------------------------------------

std::optional<std::string> resolve_entity(const KgDatabase& db, EntityTable table,
                                          std::string_view query_name) {
    std::vector<std::string_view> keys;
    if (table == EntityTable::person) {
        for (const auto& p : db.persons()) keys.push_back(p.name);
    } else {
        for (const auto& m : db.movies()) keys.push_back(m.title);
    }
    if (keys.empty() || text::trim(query_name).empty()) return std::nullopt;

    auto pick_smallest = [](std::optional<std::string_view>& best, std::string_view k) {
        if (!best || k < *best) best = k;
    };

    std::optional<std::string_view> best;
    for (auto k : keys)
        if (k == query_name) pick_smallest(best, k);
    if (best) return std::string(*best);

    const auto q = text::normalize_key(query_name);
    for (auto k : keys)
        if (text::normalize_key(k) == q) pick_smallest(best, k);
    if (best) return std::string(*best);

    std::size_t best_diff = 0;
    for (auto k : keys) {
        auto nk = text::normalize_key(k);
        if (nk.empty() || (nk.find(q) == std::string::npos && q.find(nk) == std::string::npos))
            continue;
        auto diff = nk.size() > q.size() ? nk.size() - q.size() : q.size() - nk.size();
        if (!best || diff < best_diff || (diff == best_diff && k < *best)) {
            best = k;
            best_diff = diff;
        }
    }
    if (best) return std::string(*best);

    auto qterms_v = text::terms(q);
    std::set<std::string> qterms(qterms_v.begin(), qterms_v.end());
    if (qterms.empty()) return std::nullopt;
    double best_score = 0.0;
    for (auto k : keys) {
        auto kv = text::terms(k);
        std::set<std::string> kterms(kv.begin(), kv.end());
        std::size_t inter = 0;
        for (const auto& t : kterms) inter += qterms.count(t);
        if (inter == 0) continue;
        double score = static_cast<double>(inter) /
                       static_cast<double>(qterms.size() + kterms.size() - inter);
        if (score > best_score || (score == best_score && best && k < *best)) {
            best = k;
            best_score = score;
        }
    }
    if (best) return std::string(*best);
    return std::nullopt;
}

}  // namespace crag::kg
