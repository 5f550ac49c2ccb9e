import { mountApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8700";
const reviewer = params.get("reviewer") ?? undefined;

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
mountApp(root, { baseUrl, reviewer });
