// Bootstrap: mount the app for the project named in the query string.

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (root) {
    const projectId = new URLSearchParams(window.location.search).get("project");
    if (!projectId) {
        root.innerHTML = "<p class='banner'>append ?project=&lt;id&gt; to the "
            + "URL (create one by POSTing an analysis to /projects)</p>";
    } else {
        const app = new App(root, new ApiClient(""), projectId);
        void app.init();
    }
}
