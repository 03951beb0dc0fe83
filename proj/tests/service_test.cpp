#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <thread>

#include "morphocell/service.hpp"

namespace {

using namespace morphocell;
using service::Api;
using Json = io::Json;

Json body(const service::Reply& r) { return Json::parse(r.body); }

double max_z(const Json& envelope) {
    double top = -1e300;
    for (const auto& v : envelope["items"][0]["vertices"]) top = std::max(top, v[2].get<double>());
    return top;
}

TEST(Api, Health) {
    const auto r = Api{}.health();
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(body(r)["status"], "ok");
}

TEST(Api, RecipesWithSchemas) {
    const auto r = Api{}.recipes();
    ASSERT_EQ(r.status, 200);
    const auto list = body(r)["recipes"];
    ASSERT_EQ(list.size(), 8u);
    std::set<std::string> ids;
    for (const auto& rec : list) ids.insert(rec["id"]);
    EXPECT_EQ(ids, (std::set<std::string>{"fig4", "fig6", "fig7", "fig8", "fig12a", "fig12b", "fig12c", "eq1"}));
    const auto& fig4 = list[0];
    ASSERT_EQ(fig4["id"], "fig4");
    bool found = false;
    for (const auto& p : fig4["params"]) {
        if (p["name"] != "t") continue;
        found = true;
        EXPECT_GE(p["min"].get<double>(), 0.0);
        EXPECT_TRUE(p["exclusive_min"].get<bool>());
    }
    EXPECT_TRUE(found);
}

TEST(Api, MeshRecipePeak) {
    const auto r = Api{}.mesh(R"j({"recipe": "fig12a", "t": 1, "resolution": 65})j");
    ASSERT_EQ(r.status, 200) << r.body;
    const auto j = body(r);
    EXPECT_EQ(j["format"], "morphocell.geometry");
    EXPECT_EQ(max_z(j), 1.0);
    EXPECT_EQ(j["meta"]["resolution"], 65);
    EXPECT_EQ(j["meta"]["triangle_count"], 2 * 64 * 64);
}

TEST(Api, MeshCellRoute) {
    const auto r = Api{}.mesh(R"j({"cell": {"expr": "x^2 + y^2 + z^2", "kind": "implicit"}, "resolution": 33})j");
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_GT(body(r)["items"][0]["triangles"].size(), 1000u);

    const auto disc = Api{}.mesh(
        R"j({"cell": {"expr": "H - b*(x^2 + y^2)", "params": {"H": 10, "b": 0.1},
            "domain": {"type": "disc", "center": [0, 0], "radius": 10}}, "resolution": 65})j");
    ASSERT_EQ(disc.status, 200) << disc.body;
    EXPECT_EQ(max_z(body(disc)), 10.0);
}

TEST(Api, NonPositiveTimeIs422) {
    for (const char* req : {R"j({"recipe": "fig4", "t": -1})j", R"j({"recipe": "fig12a", "t": 0})j",
                            R"j({"cell": {"expr": "abs(x*y)^(1/t)"}, "t": -1})j"}) {
        const auto r = Api{}.mesh(req);
        EXPECT_EQ(r.status, 422) << req;
        EXPECT_EQ(body(r)["error"]["code"], "TIME_NOT_POSITIVE") << req;
    }
    const auto s = Api{}.spiral(R"j({"kind": "log", "t": -0.5})j");
    EXPECT_EQ(s.status, 422);
}

TEST(Api, InputErrorsAre400) {
    const Api api;
    auto r = api.mesh(R"j({"cell": {"expr": "x $ y"}})j");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body(r)["error"]["code"], "LEX_ERROR");
    EXPECT_EQ(body(r)["error"]["position"], 2);

    r = api.mesh(R"j({"cell": {"expr": "abs(x, y)"}})j");
    EXPECT_EQ(body(r)["error"]["code"], "ARITY_ERROR");
    r = api.mesh(R"j({"cell": {"expr": "x + k"}})j");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body(r)["error"]["code"], "UNBOUND_PARAM");
    r = api.mesh("{not json");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body(r)["error"]["code"], "BAD_JSON");
    r = api.mesh(R"j({"cell": {}})j");
    EXPECT_EQ(r.status, 400);
    r = api.mesh(R"j({"recipe": "fig99"})j");
    EXPECT_EQ(r.status, 400);
    r = api.mesh(R"j({"recipe": "fig6"})j");
    EXPECT_EQ(r.status, 400);
    r = api.mesh(R"j({"cell": {"expr": "x", "kind": "implicit"}, "resolution": 1000})j");
    EXPECT_EQ(r.status, 400);
    r = api.mesh(R"j({"cell": {"expr": "x", "domain": {"type": "disc", "radius": -1}}})j");
    EXPECT_EQ(r.status, 400);
    r = api.spiral(R"j({"kind": "archimedean"})j");
    EXPECT_EQ(r.status, 400);
}

TEST(Api, DomainErrorsAre422) {
    const auto empty = Api{}.mesh(R"j({"cell": {"expr": "x^2 + y^2 + z^2", "kind": "implicit", "iso": 100}})j");
    EXPECT_EQ(empty.status, 422);
    EXPECT_EQ(body(empty)["error"]["code"], "EMPTY_MESH");
}

TEST(Api, Spirals) {
    const Api api;
    auto j = body(api.spiral(R"j({"recipe": "fig7", "params": {"n": 6}})j"));
    ASSERT_EQ(j["items"].size(), 3u);
    EXPECT_EQ(j["items"][2]["color"], "red");
    j = body(api.spiral(R"j({"kind": "fibonacci", "n": 6})j"));
    ASSERT_EQ(j["items"][0]["arcs"].size(), 6u);
    EXPECT_EQ(j["items"][0]["arcs"][5]["radius"], 8.0);
    j = body(api.spiral(R"j({"kind": "log", "b": 0.6366197723675814, "t": 0.5, "theta": [0, 3.14], "samples": 11})j"));
    EXPECT_EQ(j["items"][0]["points"].size(), 11u);
    EXPECT_EQ(j["items"][0]["points"][0][0], 1.0);
}

TEST(Api, ConcurrentIdenticalRequestsAgree) {
    const Api api;
    const std::string req = R"j({"recipe": "fig4", "t": 2, "resolution": 65})j";
    std::vector<std::future<service::Reply>> futures;
    for (int k = 0; k < 6; ++k) futures.push_back(std::async(std::launch::async, [&] { return api.mesh(req); }));
    const auto first = api.mesh(req);
    for (auto& f : futures) {
        const auto r = f.get();
        EXPECT_EQ(r.status, first.status);
        EXPECT_TRUE(r.body == first.body);
    }
}

class LiveServer : public ::testing::Test {
protected:
    void SetUp() override {
        static_dir_ = std::filesystem::temp_directory_path() / "morphocell_static_test";
        std::filesystem::create_directories(static_dir_);
        std::ofstream(static_dir_ / "index.html") << "<html>explorer</html>";
        api_.mount(server_, static_dir_.string());
        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    void TearDown() override {
        server_.stop();
        if (thread_.joinable()) thread_.join();
        std::filesystem::remove_all(static_dir_);
    }

    httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

    Api api_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::filesystem::path static_dir_;
};

TEST_F(LiveServer, EndpointsOverHttp) {
    auto c = client();
    auto health = c.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(Json::parse(health->body)["status"], "ok");

    auto recipes = c.Get("/api/recipes");
    ASSERT_TRUE(recipes);
    EXPECT_EQ(Json::parse(recipes->body)["recipes"].size(), 8u);

    auto mesh = c.Post("/api/mesh", R"j({"recipe": "fig12a", "t": 1, "resolution": 65})j", "application/json");
    ASSERT_TRUE(mesh);
    EXPECT_EQ(mesh->status, 200);
    EXPECT_EQ(max_z(Json::parse(mesh->body)), 1.0);

    auto bad = c.Post("/api/mesh", R"j({"recipe": "fig4", "t": -1})j", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 422);
    EXPECT_EQ(Json::parse(bad->body)["error"]["code"], "TIME_NOT_POSITIVE");

    auto page = c.Get("/index.html");
    ASSERT_TRUE(page);
    EXPECT_EQ(page->status, 200);
    EXPECT_EQ(page->body, "<html>explorer</html>");
}

TEST_F(LiveServer, HealthStaysResponsiveDuringLongJobs) {
    auto heavy = std::async(std::launch::async, [this] {
        auto c = client();
        c.set_read_timeout(60, 0);
        return c.Post("/api/mesh", R"j({"cell": {"expr": "x^2 + y^2 + z^2", "kind": "implicit"}, "resolution": 161})j",
                      "application/json");
    });
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    auto c = client();
    auto health = c.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(heavy.wait_for(std::chrono::seconds(0)), std::future_status::timeout);
    auto result = heavy.get();
    ASSERT_TRUE(result);
    EXPECT_EQ(result->status, 200);
}

}  // namespace
