/**
 * Entry point. Query parameters keep the page deployable next to any
 * service instance:
 *   ?api=http://host:port   service base URL (default: same origin)
 *   ?student=some-id        student/session id (default: a fresh id)
 */

import { createApi } from "./api.js";
import { CuePlayer } from "./cues.js";
import { App } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "";
const studentId = params.get("student") ?? `web-${Math.random().toString(36).slice(2, 10)}`;

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");

const app = new App(root, createApi(base), new CuePlayer(), studentId);
app.start();
